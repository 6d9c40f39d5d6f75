"""Symmetric quadrature rules on triangles.

Rules are expressed in barycentric coordinates with weights summing to 1, so
``integral over T  ~  area(T) * sum(w_i * f(x_i))``.  Low degrees come from
the classical symmetric 1/3/4/6/7-point tables; higher degrees are generated
on demand from the fully symmetric simplex-lattice family of odd-degree rules
(exact rational weights, alternating in sign).  Composite refinement splits a
triangle into s^2 congruent subtriangles for robust integration of
non-polynomial integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "TriangleRule",
    "triangle_rule",
    "composite_rule",
    "subdivide_barycentric",
    "barycentric_monomial_integral",
]


@dataclass(frozen=True)
class TriangleRule:
    """Quadrature rule on a triangle in barycentric form.

    Attributes
    ----------
    points : np.ndarray, shape (m, 3)
        Barycentric coordinates of the nodes.
    weights : np.ndarray, shape (m,)
        Weights summing to 1 (relative to the triangle area).
    degree : int
        Highest total polynomial degree integrated exactly.
    """

    points: np.ndarray
    weights: np.ndarray
    degree: int


def _sym3(a: float):
    b = 1.0 - 2.0 * a
    return [(b, a, a), (a, b, a), (a, a, b)]


_TABLE: dict[int, TriangleRule] = {}


def _add_table_rule(degree: int, points, weights):
    _TABLE[degree] = TriangleRule(
        points=np.array(points, dtype=float),
        weights=np.array(weights, dtype=float),
        degree=degree,
    )


_add_table_rule(1, [(1 / 3, 1 / 3, 1 / 3)], [1.0])
_add_table_rule(2, _sym3(1 / 6), [1 / 3] * 3)
_add_table_rule(
    3,
    [(1 / 3, 1 / 3, 1 / 3)] + _sym3(0.2),
    [-27 / 48] + [25 / 48] * 3,
)
_add_table_rule(
    4,
    _sym3(0.445948490915965) + _sym3(0.091576213509771),
    [0.223381589678011] * 3 + [0.109951743655322] * 3,
)
_add_table_rule(
    5,
    [(1 / 3, 1 / 3, 1 / 3)]
    + _sym3(0.470142064105115)
    + _sym3(0.101286507323456),
    [0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3,
)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _lattice_rule(s: int) -> TriangleRule:
    """Fully symmetric simplex rule of degree 2s + 1 with exact rational weights."""
    d = 2 * s + 1
    points = []
    weights = []
    for i in range(s + 1):
        denom = d + 2 - 2 * i
        w = (
            Fraction((-1) ** i)
            * Fraction(denom) ** d
            / (Fraction(4) ** s * math.factorial(i) * math.factorial(d + 2 - i))
        )
        for comp in _compositions(s - i, 3):
            points.append([Fraction(2 * c + 1, denom) for c in comp])
            weights.append(w)
    # weights above integrate over the unit reference triangle (area 1/2)
    pts = np.array([[float(x) for x in p] for p in points])
    wts = np.array([float(2 * w) for w in weights])
    return TriangleRule(points=pts, weights=wts, degree=d)


def triangle_rule(degree: int) -> TriangleRule:
    """Smallest built-in symmetric rule exact for the requested total degree."""
    if degree < 0:
        raise ValueError("quadrature degree must be nonnegative")
    degree = max(degree, 1)
    if degree in _TABLE:
        return _TABLE[degree]
    return _lattice_rule(degree // 2)  # smallest s with 2s + 1 >= degree


@lru_cache(maxsize=None)
def subdivide_barycentric(s: int) -> tuple[np.ndarray, ...]:
    """Corner matrices of the s^2 congruent subtriangles of a triangle.

    Each entry is a (3, 3) array whose rows are the barycentric coordinates
    of one subtriangle's corners in the parent triangle.  Order is fixed:
    lattice cell (p, q) ascending, upward subtriangle first, then the
    downward one when present.
    """
    if s < 1:
        raise ValueError("subdivision factor must be positive")

    def corner(p, q):
        return np.array([(s - p - q) / s, p / s, q / s])

    out = []
    for p in range(s):
        for q in range(s - p):
            out.append(np.array([corner(p, q), corner(p + 1, q), corner(p, q + 1)]))
            if p + q <= s - 2:
                out.append(
                    np.array([corner(p + 1, q), corner(p + 1, q + 1), corner(p, q + 1)])
                )
    return tuple(out)


def composite_rule(base: TriangleRule, s: int) -> TriangleRule:
    """Apply a base rule on each of the s^2 congruent subtriangles."""
    if s == 1:
        return base
    blocks_pts = []
    blocks_wts = []
    for corners in subdivide_barycentric(s):
        blocks_pts.append(base.points @ corners)
        blocks_wts.append(base.weights / (s * s))
    return TriangleRule(
        points=np.vstack(blocks_pts),
        weights=np.concatenate(blocks_wts),
        degree=base.degree,
    )


def barycentric_monomial_integral(a: int, b: int, c: int) -> float:
    """Exact integral of ``l1^a l2^b l3^c`` over a triangle of unit area.

    Equals ``2 a! b! c! / (a + b + c + 2)!``; multiply by the actual area for
    a general triangle.
    """
    return float(
        Fraction(2)
        * math.factorial(a)
        * math.factorial(b)
        * math.factorial(c)
        / math.factorial(a + b + c + 2)
    )
