"""Input validation helpers shared by the estimator layer and the CLI."""

from __future__ import annotations

import numpy as np

from .density import Density, GegenbauerDensity, JacobiDensity, UniformDensity

__all__ = ["check_points", "check_target_function", "resolve_density"]


def check_points(X) -> np.ndarray:
    """Coerce to a finite (n, 2) float array of planar points."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 and X.shape == (2,):
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("points contain non-finite coordinates")
    return X


def check_target_function(f):
    """The target must be a callable f(x, y); arrays in, arrays out preferred."""
    if not callable(f):
        raise TypeError(f"target function must be callable, got {type(f).__name__}")
    return f


def resolve_density(spec) -> Density:
    """Accept a Density instance or one of the string forms.

    Strings: "uniform", "jacobi:<alpha>:<beta>", "gegenbauer:<gamma>".
    """
    if isinstance(spec, Density):
        return spec
    if isinstance(spec, str):
        parts = spec.split(":")
        name = parts[0].strip().lower()
        try:
            if name == "uniform" and len(parts) == 1:
                return UniformDensity()
            if name == "jacobi" and len(parts) == 3:
                return JacobiDensity(float(parts[1]), float(parts[2]))
            if name == "gegenbauer" and len(parts) == 2:
                return GegenbauerDensity(float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"bad density spec {spec!r}: {exc}") from None
        raise ValueError(
            f"unknown density spec {spec!r}; use 'uniform', 'jacobi:A:B' or 'gegenbauer:G'"
        )
    raise TypeError(f"density must be a Density or a string spec, got {type(spec).__name__}")
