"""Probability densities on [-1, 1] with exact normalization constants and moments.

The edge weights used by the reconstruction operators are probability
densities on the reference interval.  The two-parameter Jacobi family

    w(t) = (1 - t)^alpha * (1 + t)^beta / (2^(alpha+beta+1) * B(alpha+1, beta+1))

covers the uniform density (alpha = beta = 0) and the symmetric Gegenbauer
subfamily (alpha = beta).  Every density exposes pointwise evaluation and
exact raw moments ``m_n = int t^n w(t) dt``; all downstream formulas
(orthogonal polynomials, Gauss rules, basis coefficients) consume moments.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "Density",
    "JacobiDensity",
    "GegenbauerDensity",
    "UniformDensity",
    "CustomDensity",
    "MomentSequence",
    "beta_fn",
    "log_beta",
    "jacobi_normalization",
]


def log_beta(x: float, y: float) -> float:
    """Natural log of the Euler Beta function, via log-Gamma differences."""
    if x <= 0.0 or y <= 0.0:
        raise ValueError(f"beta function requires positive arguments, got ({x}, {y})")
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def beta_fn(x: float, y: float) -> float:
    """Euler Beta function B(x, y) for x, y > 0.

    Computed as ``exp(lgamma(x) + lgamma(y) - lgamma(x + y))`` so that large
    arguments do not overflow intermediate Gamma values.
    """
    return math.exp(log_beta(x, y))


def jacobi_normalization(alpha: float, beta: float) -> float:
    """Normalization constant making (1-t)^alpha (1+t)^beta a probability density.

    Parameters
    ----------
    alpha, beta : float
        Exponents of the weight; both must exceed -1 for integrability.

    Returns
    -------
    float
        ``1 / (2^(alpha+beta+1) * B(alpha+1, beta+1))``.
    """
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError(
            f"density exponents must exceed -1, got alpha={alpha}, beta={beta}"
        )
    return math.exp(-(alpha + beta + 1.0) * math.log(2.0) - log_beta(alpha + 1.0, beta + 1.0))


def _jacobi_moment(alpha: float, beta: float, n: int) -> float:
    """Raw moment of the normalized Jacobi density by the finite Beta sum.

    With u = (1+t)/2 the moment becomes
    ``int_0^1 (2u-1)^n u^beta (1-u)^alpha du / B(alpha+1, beta+1)``;
    expanding the binomial and reducing each Beta ratio with
    ``B(x+1, y) = x/(x+y) B(x, y)`` leaves a finite sum of rationals in
    (alpha, beta).  The sum alternates and cancels heavily for large n, so it
    is evaluated in exact rational arithmetic on the binary values of the
    inputs and rounded once at the end.
    """
    if n == 0:
        return 1.0
    a = Fraction(alpha)
    b = Fraction(beta)
    total = Fraction(0)
    # ratio = 2^i * B(beta+1+i, alpha+1) / B(beta+1, alpha+1)
    ratio = Fraction(1)
    for i in range(n + 1):
        term = math.comb(n, i) * ratio
        total += term if (n - i) % 2 == 0 else -term
        ratio *= 2 * (b + 1 + i) / (a + b + 2 + i)
    return float(total)


class Density:
    """A probability density on [-1, 1].

    Subclasses provide pointwise evaluation through ``__call__`` and exact
    raw moments through ``moment``.  Instances are immutable value objects
    and safe for concurrent reads.
    """

    kind = "abstract"

    def __call__(self, t):
        raise NotImplementedError

    def moment(self, n: int) -> float:
        """Raw moment ``m_n = int_{-1}^{1} t^n w(t) dt``."""
        raise NotImplementedError

    def moments(self, upto: int) -> np.ndarray:
        """Array of raw moments ``m_0 .. m_upto``."""
        if upto < 0:
            raise ValueError("moment order must be nonnegative")
        return np.array([self.moment(i) for i in range(upto + 1)])

    def label(self) -> str:
        """Short human-readable identifier used in reports."""
        return self.kind


class JacobiDensity(Density):
    """Normalized Jacobi density ``a * (1-t)^alpha * (1+t)^beta`` on [-1, 1].

    Parameters
    ----------
    alpha, beta : float
        Shape parameters, both > -1.  Negative values put integrable
        singularities at t = 1 (alpha < 0) or t = -1 (beta < 0).
    singular_endpoint : {"inf", "raise"}
        Behavior when evaluating at an endpoint where the density is
        unbounded.  Gauss nodes never touch the endpoints, so this only
        matters for plotting and sampling.

    Attributes
    ----------
    normalization : float
        The constant ``a`` making the density integrate to one.
    """

    kind = "jacobi"

    def __init__(self, alpha: float, beta: float, singular_endpoint: str = "inf"):
        if alpha <= -1.0 or beta <= -1.0:
            raise ValueError(
                f"Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"
            )
        if singular_endpoint not in ("inf", "raise"):
            raise ValueError("singular_endpoint must be 'inf' or 'raise'")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.singular_endpoint = singular_endpoint
        self.normalization = jacobi_normalization(self.alpha, self.beta)
        self._moment_cache: dict[int, float] = {0: 1.0}

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0 + 1e-14):
            raise ValueError("density evaluation requires |t| <= 1")
        if self.singular_endpoint == "raise":
            if (self.alpha < 0.0 and np.any(t == 1.0)) or (
                self.beta < 0.0 and np.any(t == -1.0)
            ):
                raise ValueError("density is unbounded at the requested endpoint")
        with np.errstate(divide="ignore"):
            vals = (
                self.normalization
                * np.power(1.0 - t, self.alpha)
                * np.power(1.0 + t, self.beta)
            )
        return vals if vals.ndim else float(vals)

    def moment(self, n: int) -> float:
        if n < 0:
            raise ValueError("moment order must be nonnegative")
        if n not in self._moment_cache:
            self._moment_cache[n] = _jacobi_moment(self.alpha, self.beta, n)
        return self._moment_cache[n]

    def label(self) -> str:
        return f"jacobi({self.alpha:g},{self.beta:g})"

    def __repr__(self) -> str:
        return f"JacobiDensity(alpha={self.alpha!r}, beta={self.beta!r})"


class GegenbauerDensity(JacobiDensity):
    """Symmetric Jacobi density, alpha = beta = gamma.

    Symmetry about the origin makes every odd moment vanish; this is
    enforced analytically rather than left to arithmetic cancellation.
    """

    kind = "gegenbauer"

    def __init__(self, gamma: float, singular_endpoint: str = "inf"):
        super().__init__(gamma, gamma, singular_endpoint=singular_endpoint)
        self.gamma = float(gamma)

    def moment(self, n: int) -> float:
        if n < 0:
            raise ValueError("moment order must be nonnegative")
        if n % 2 == 1:
            return 0.0
        return super().moment(n)

    def label(self) -> str:
        return f"gegenbauer({self.gamma:g})"

    def __repr__(self) -> str:
        return f"GegenbauerDensity(gamma={self.gamma!r})"


class UniformDensity(GegenbauerDensity):
    """Uniform density w(t) = 1/2, the gamma = 0 member of the symmetric family."""

    kind = "uniform"

    def __init__(self):
        super().__init__(0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0 + 1e-14):
            raise ValueError("density evaluation requires |t| <= 1")
        vals = np.full_like(t, 0.5)
        return vals if vals.ndim else float(vals)

    def moment(self, n: int) -> float:
        if n < 0:
            raise ValueError("moment order must be nonnegative")
        return 0.0 if n % 2 == 1 else 1.0 / (n + 1.0)

    def label(self) -> str:
        return "uniform"

    def __repr__(self) -> str:
        return "UniformDensity()"


class CustomDensity(Density):
    """User-supplied density given by a pointwise evaluator plus a moment provider.

    A pointwise evaluator alone is not accepted: every downstream formula
    consumes moments, and quadrature of possibly singular integrands is not a
    reliable substitute for an explicit moment sequence.

    Parameters
    ----------
    pdf : callable
        Vectorized evaluator of the density on [-1, 1].
    moment_fn : callable
        ``moment_fn(n) -> float`` returning the exact raw moment of order n.
    name : str
        Identifier used in reports.
    """

    kind = "custom"

    def __init__(self, pdf, moment_fn, name: str = "custom"):
        if not callable(pdf) or not callable(moment_fn):
            raise TypeError("CustomDensity requires a callable pdf and moment provider")
        m0 = float(moment_fn(0))
        if abs(m0 - 1.0) > 1e-12:
            raise ValueError(f"custom density is not normalized: m_0 = {m0}")
        probe = np.asarray(pdf(np.linspace(-0.999, 0.999, 41)), dtype=float)
        if np.any(probe < -1e-12):
            raise ValueError("custom density is negative on (-1, 1)")
        self._pdf = pdf
        self._moment_fn = moment_fn
        self.name = name
        self._moment_cache: dict[int, float] = {0: 1.0}

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0 + 1e-14):
            raise ValueError("density evaluation requires |t| <= 1")
        vals = np.asarray(self._pdf(t), dtype=float)
        return vals if vals.ndim else float(vals)

    def moment(self, n: int) -> float:
        if n < 0:
            raise ValueError("moment order must be nonnegative")
        if n not in self._moment_cache:
            self._moment_cache[n] = float(self._moment_fn(n))
        return self._moment_cache[n]

    def label(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"CustomDensity(name={self.name!r})"


class MomentSequence:
    """Lazily extended cache of the raw moments of a density.

    Wraps a :class:`Density` and memoizes ``m_0 .. m_N`` as requested.  The
    sequence of a genuine probability measure supported in [-1, 1] satisfies
    ``m_0 = 1``, ``|m_n| <= 1`` and has positive definite Hankel matrices;
    :meth:`require_positive_definite` checks the latter and names the first
    failing order.
    """

    def __init__(self, density: Density):
        self.density = density
        self._values = [1.0]

    def extend_to(self, n: int) -> None:
        while len(self._values) <= n:
            self._values.append(self.density.moment(len(self._values)))

    def __getitem__(self, n: int) -> float:
        if n < 0:
            raise IndexError("moment order must be nonnegative")
        self.extend_to(n)
        return self._values[n]

    def upto(self, n: int) -> np.ndarray:
        self.extend_to(n)
        return np.array(self._values[: n + 1])

    def hankel(self, s: int) -> np.ndarray:
        """The (s+1) x (s+1) Hankel matrix ``[m_{i+j}]``."""
        m = self.upto(2 * s)
        return np.array([[m[i + j] for j in range(s + 1)] for i in range(s + 1)])

    def require_positive_definite(self, s: int) -> None:
        for order in range(s + 1):
            try:
                np.linalg.cholesky(self.hankel(order))
            except np.linalg.LinAlgError:
                raise ValueError(
                    f"moment Hankel matrix is not positive definite at order {order}"
                ) from None
