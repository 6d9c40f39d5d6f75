"""Grid-search selection of the Jacobi edge-density parameters.

The total validation error of a candidate (alpha, beta) is the sum of the
reconstruction errors of the order-2 weighted scheme over a collection of
target functions and meshes.  The search scans a finite candidate grid and
keeps the first strict improver, so ties resolve to the earliest grid entry;
parallel execution fills the error table first and then applies the same
scan, which yields an identical result.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bench import DEFAULT_SUBDIVISIONS, lp_error
from .density import JacobiDensity
from .operators import make_scheme, reconstruct_global

__all__ = [
    "DEFAULT_GRID_VALUES",
    "default_grid",
    "parse_grid_csv",
    "total_error",
    "grid_search",
    "TuningReport",
]

DEFAULT_GRID_VALUES = (-0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0)


def default_grid() -> tuple[tuple[float, float], ...]:
    """The documented 49-pair default candidate grid, row-major in alpha."""
    return tuple((a, b) for a in DEFAULT_GRID_VALUES for b in DEFAULT_GRID_VALUES)


def parse_grid_csv(path) -> tuple[tuple[float, float], ...]:
    """Candidate pairs from a CSV file with one 'alpha,beta' pair per line."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line or line.lower().startswith("alpha"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'alpha,beta', got {line!r}")
            pairs.append((float(parts[0]), float(parts[1])))
    if not pairs:
        raise ValueError(f"no candidate pairs found in {path}")
    return tuple(pairs)


def _function_label(f, position: int) -> str:
    return getattr(f, "id", None) or getattr(f, "__name__", None) or f"function{position}"


def _candidate_error(pair, functions, meshes, norm, edge_points, subdivisions, n_jobs=1):
    alpha, beta = pair
    scheme = make_scheme(JacobiDensity(alpha, beta), order=2, edge_points=edge_points)
    breakdown = {}
    total = 0.0
    for r, f in enumerate(functions):
        fid = _function_label(f, r)
        for mesh in meshes:
            recon = reconstruct_global(f, mesh, scheme, n_jobs=n_jobs)
            err = lp_error(f, recon, norm=norm, subdivisions=subdivisions)
            breakdown[(fid, mesh.level if mesh.level is not None else mesh.n_triangles)] = err
            total += err
    return total, breakdown


def total_error(pair, functions, meshes, norm: str = "l1", edge_points: int = 16,
                subdivisions: int = DEFAULT_SUBDIVISIONS) -> float:
    """Total validation error of one (alpha, beta) candidate."""
    total, _ = _candidate_error(pair, functions, meshes, norm, edge_points, subdivisions)
    return total


@dataclass
class TuningReport:
    """Outcome of a grid search: winner, its error, and the full table."""

    best_pair: tuple[float, float]
    best_error: float
    table: list[tuple[float, float, float]]
    breakdown: dict = field(default_factory=dict)
    norm: str = "l1"
    settings: dict = field(default_factory=dict)

    def rescan_argmin(self) -> tuple[float, float]:
        """First table entry attaining the minimal error (independent check)."""
        best = None
        for alpha, beta, err in self.table:
            if best is None or err < best[2]:
                best = (alpha, beta, err)
        return (best[0], best[1])

    def to_csv(self, path) -> None:
        keys = sorted({k for bd in self.breakdown.values() for k in bd})
        with open(path, "w", encoding="utf-8") as fh:
            header = "alpha,beta,total_error"
            header += "".join(f",error_{fid}_n{lvl}" for fid, lvl in keys)
            fh.write(header + "\n")
            for alpha, beta, err in self.table:
                bd = self.breakdown.get((alpha, beta), {})
                cells = "".join(f",{bd[k]!r}" if k in bd else "," for k in keys)
                fh.write(f"{alpha!r},{beta!r},{err!r}{cells}\n")


def grid_search(grid, functions, meshes, norm: str = "l1", edge_points: int = 16,
                subdivisions: int = DEFAULT_SUBDIVISIONS, n_jobs: int = 1) -> TuningReport:
    """Exhaustive search for the best (alpha, beta) over a candidate grid.

    Keeps the first candidate that strictly improves the running minimum.
    With ``n_jobs > 1`` all candidate errors are computed concurrently and
    the completed table is scanned in grid order, which gives the same
    winner as the sequential loop.
    """
    grid = tuple(tuple(p) for p in grid)
    if not grid:
        raise ValueError("candidate grid is empty")
    for alpha, beta in grid:
        if alpha <= -1.0 or beta <= -1.0:
            raise ValueError(f"inadmissible candidate ({alpha}, {beta}): parameters must exceed -1")
    settings = {"edge_points": edge_points, "subdivisions": subdivisions, "norm": norm}

    table: list[tuple[float, float, float]] = []
    breakdown: dict = {}
    if n_jobs <= 1:
        best_pair = None
        best_error = np.inf
        for pair in grid:
            err, bd = _candidate_error(pair, functions, meshes, norm,
                                       edge_points, subdivisions)
            table.append((pair[0], pair[1], err))
            breakdown[pair] = bd
            if err < best_error:
                best_error = err
                best_pair = pair
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            futures = [
                pool.submit(_candidate_error, pair, functions, meshes, norm,
                            edge_points, subdivisions)
                for pair in grid
            ]
            for pair, fut in zip(grid, futures):
                err, bd = fut.result()
                table.append((pair[0], pair[1], err))
                breakdown[pair] = bd
        best_pair = None
        best_error = np.inf
        for alpha, beta, err in table:
            if err < best_error:
                best_error = err
                best_pair = (alpha, beta)
    return TuningReport(best_pair=best_pair, best_error=float(best_error), table=table,
                        breakdown=breakdown, norm=norm, settings=settings)
