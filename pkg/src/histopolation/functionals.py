"""Degree-of-freedom functionals for the weighted reconstruction schemes.

For a target order k >= 2 a triangle carries K = (k+1)(k+2)/2 functionals:

* three weighted edge means (one per edge),
* weighted edge moments against the orthogonal polynomials of degrees
  2 .. k on each edge (3(k-1) functionals),
* for k >= 3, interior moments against a basis of total-degree k-3
  barycentric monomials, weighted by a positive interior density
  (1/area by default), numbering (k-1)(k-2)/2.

The fixed ordering of a DOF vector is: edge means for edges 0,1,2, then the
degree-2 moments for edges 0,1,2, then degree 3, ..., then the interior
moments in lexicographic exponent order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import Density
from .orthopoly import GaussRule, OrthoBasis, gauss_rule, monic_sequence
from .triquad import TriangleRule, triangle_rule

__all__ = [
    "DofDescriptor",
    "Scheme",
    "dof_descriptors",
    "dof_count",
    "interior_exponents",
    "edge_mean",
    "edge_moment",
    "interior_moment",
    "dof_vector",
]

DEFAULT_EDGE_POINTS = 16
MAX_SCHEME_ORDER = 5


@dataclass(frozen=True)
class DofDescriptor:
    """Identifies one functional: its kind and the edge/moment/interior index."""

    kind: str  # "edge-mean" | "edge-moment" | "interior"
    edge: int | None = None
    moment: int | None = None
    index: int | None = None

    def __str__(self) -> str:
        if self.kind == "edge-mean":
            return f"I[{self.edge}]"
        if self.kind == "edge-moment":
            return f"L{self.moment}[{self.edge}]"
        return f"J[{self.index}]"


def dof_count(order: int) -> int:
    return (order + 1) * (order + 2) // 2


def interior_count(order: int) -> int:
    return (order - 1) * (order - 2) // 2


def interior_exponents(order: int) -> tuple[tuple[int, int, int], ...]:
    """Barycentric exponents of the interior test basis, total degree k - 3.

    Lexicographic in (a, b, c); the count equals (k-1)(k-2)/2.
    """
    if order < 3:
        return ()
    d = order - 3
    return tuple(
        (a, b, d - a - b) for a in range(d + 1) for b in range(d - a + 1)
    )


def dof_descriptors(order: int) -> tuple[DofDescriptor, ...]:
    if order < 2:
        raise ValueError(f"scheme order must be at least 2, got {order}")
    out = [DofDescriptor("edge-mean", edge=j) for j in range(3)]
    for m in range(2, order + 1):
        out.extend(DofDescriptor("edge-moment", edge=j, moment=m) for j in range(3))
    out.extend(
        DofDescriptor("interior", index=i) for i in range(interior_count(order))
    )
    assert len(out) == dof_count(order)
    return tuple(out)


def _edge_values(f, tri, edge: int, nodes: np.ndarray) -> np.ndarray:
    pts = tri.edge_point(edge, nodes)
    try:
        vals = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    except Exception:
        vals = None
    if vals is None or vals.shape != nodes.shape:
        vals = np.array([float(f(x, y)) for x, y in pts])
    return vals


def edge_mean(f, tri, edge: int, rule: GaussRule) -> float:
    """Weighted mean of f along a local edge: int f(gamma_edge(t)) w(t) dt.

    Exact to rounding when the edge restriction of f is a polynomial of
    degree <= 2q - 1 in the edge parameter.
    """
    vals = _edge_values(f, tri, edge, rule.nodes)
    return float(np.dot(rule.weights, vals))


def edge_moment(f, tri, edge: int, m: int, ortho: OrthoBasis, rule: GaussRule) -> float:
    """Weighted edge moment against the degree-m orthogonal polynomial.

    Vanishes by orthogonality whenever the edge restriction of f has degree
    below m.  Requires 2 <= m <= the order of ``ortho``.
    """
    if m < 2 or m > ortho.order:
        raise ValueError(
            f"edge moment degree must lie in [2, {ortho.order}], got {m}"
        )
    vals = _edge_values(f, tri, edge, rule.nodes)
    return float(np.dot(rule.weights * ortho.polys[m](rule.nodes), vals))


def _interior_g_values(order: int, pts: np.ndarray) -> np.ndarray:
    """Values of the interior test monomials at barycentric points, (r_k, m)."""
    exps = interior_exponents(order)
    return np.array(
        [
            pts[:, 0] ** a * pts[:, 1] ** b * pts[:, 2] ** c
            for (a, b, c) in exps
        ]
    )


def interior_moment(f, tri, index: int, order: int, rule: TriangleRule | None = None,
                    weight=None) -> float:
    """Interior moment of f against the index-th test monomial.

    With the default interior density 1/area the triangle area cancels and
    the value is a plain weighted sum over the quadrature nodes.  A custom
    positive density ``weight(x, y)`` reinstates the area factor.
    """
    if order < 3:
        raise ValueError(f"order {order} has no interior degrees of freedom")
    r_k = interior_count(order)
    if index < 0 or index >= r_k:
        raise ValueError(f"interior index must lie in [0, {r_k}), got {index}")
    if rule is None:
        rule = triangle_rule(2 * order + 2)
    pts = tri.from_barycentric(rule.points)
    try:
        vals = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    except Exception:
        vals = None
    if vals is None or vals.shape != (len(pts),):
        vals = np.array([float(f(x, y)) for x, y in pts])
    g = _interior_g_values(order, rule.points)[index]
    if weight is None:
        return float(np.dot(rule.weights * g, vals))
    w = np.asarray(weight(pts[:, 0], pts[:, 1]), dtype=float)
    return float(tri.area * np.dot(rule.weights * g, vals * w))


class Scheme:
    """Order, density and quadrature data of one reconstruction scheme.

    Precomputes the Gauss rule of the edge density, the monic orthogonal
    polynomials (with their values at the Gauss nodes), and the interior
    triangle rule.  The dual local basis is attached by the operator layer.

    Parameters
    ----------
    density : Density
    order : int
        Polynomial order k, 2 <= k <= 5.
    edge_points : int
        Gauss rule size for edge integrals; the default is exact through
        degree 31 and leaves the target function as the only error source.
    """

    def __init__(self, density: Density, order: int = 2,
                 edge_points: int = DEFAULT_EDGE_POINTS, ortho: OrthoBasis | None = None):
        if order < 2 or order > MAX_SCHEME_ORDER:
            raise ValueError(
                f"scheme order must lie in [2, {MAX_SCHEME_ORDER}], got {order}"
            )
        self.density = density
        self.order = order
        self.edge_rule = gauss_rule(density, edge_points)
        self.ortho = ortho if ortho is not None else monic_sequence(density, order)
        if self.ortho.order < order:
            raise ValueError("orthogonal basis order is below the scheme order")
        self.descriptors = dof_descriptors(order)
        # weighted edge vectors: weights * pi_m(nodes) for m = 2..k
        self.moment_weights = {
            m: self.edge_rule.weights * self.ortho.polys[m](self.edge_rule.nodes)
            for m in range(2, order + 1)
        }
        if order >= 3:
            self.interior_rule = triangle_rule(2 * order + 2)
            g = _interior_g_values(order, self.interior_rule.points)
            self.interior_weights = g * self.interior_rule.weights
        else:
            self.interior_rule = None
            self.interior_weights = np.zeros((0, 0))
        self.basis = None  # LocalBasis, set by the operator layer

    @property
    def dof_count(self) -> int:
        return dof_count(self.order)

    def label(self) -> str:
        return f"order-{self.order} {self.density.label()}"


def dof_vector(f, tri, scheme: Scheme) -> np.ndarray:
    """All K functionals of f on one triangle, in the documented order."""
    out = np.empty(scheme.dof_count)
    pos = 0
    for j in range(3):
        out[pos] = edge_mean(f, tri, j, scheme.edge_rule)
        pos += 1
    for m in range(2, scheme.order + 1):
        for j in range(3):
            out[pos] = edge_moment(f, tri, j, m, scheme.ortho, scheme.edge_rule)
            pos += 1
    for i in range(interior_count(scheme.order)):
        out[pos] = interior_moment(f, tri, i, scheme.order, scheme.interior_rule)
        pos += 1
    return out
