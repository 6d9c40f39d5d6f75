"""Local dual bases and the reconstruction operators.

The weighted scheme of order k on a triangle pairs the polynomial space of
total degree k with the K = (k+1)(k+2)/2 functionals of
:mod:`histopolation.functionals`.  The dual basis (functional i applied to
dual polynomial j gives delta_ij) is available through two routes:

* a closed form for k = 2, expressed over the basis
  {l1, l2, l3, l1*l2, l3*l1, l2*l3} of barycentric monomials, and
* for any k, the inverse of the K x K matrix whose column j collects the
  functionals of the j-th trial polynomial (degree-k barycentric Bernstein
  polynomials, chosen for their bounded conditioning and exact edge
  restrictions).

Reconstruction pairs the DOF values of a target function with the dual
polynomials, triangle by triangle; no continuity is enforced across edges.
The classical baseline uses plain (unweighted) edge means with the linear
nonconforming basis 1 - 2*l_j.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import functionals as fn
from .density import Density, UniformDensity
from .functionals import Scheme
from .mesh import Mesh, Triangle
from .orthopoly import rho2 as rho2_from_moments
from .orthopoly import rho2_jacobi

__all__ = [
    "QuadraticCoeffs",
    "LocalBasis",
    "DofMatrix",
    "Reconstruction",
    "UnisolvencyError",
    "BarycentricLinearBasis",
    "BarycentricQuadraticBasis",
    "BernsteinBasis",
    "quadratic_coeffs",
    "quadratic_coeffs_jacobi",
    "quadratic_basis",
    "dof_matrix",
    "general_basis",
    "make_scheme",
    "reconstruct_local",
    "reconstruct_global",
    "classical_ch",
    "duality_matrix",
]

CONDITION_LIMIT = 1e12


class UnisolvencyError(np.linalg.LinAlgError):
    """The DOF matrix is numerically singular; the scheme is not usable."""


# ---------------------------------------------------------------------------
# local polynomial bases (evaluated in barycentric coordinates)


class BarycentricLinearBasis:
    """The three barycentric coordinates; spans the linear polynomials."""

    size = 3
    order = 1

    def evaluate(self, bary) -> np.ndarray:
        return np.asarray(bary, dtype=float)


class BarycentricQuadraticBasis:
    """{l1, l2, l3, l1*l2, l3*l1, l2*l3}; spans the quadratics."""

    size = 6
    order = 2

    def evaluate(self, bary) -> np.ndarray:
        b = np.asarray(bary, dtype=float)
        return np.stack(
            [
                b[..., 0],
                b[..., 1],
                b[..., 2],
                b[..., 0] * b[..., 1],
                b[..., 2] * b[..., 0],
                b[..., 1] * b[..., 2],
            ],
            axis=-1,
        )


class BernsteinBasis:
    """Barycentric Bernstein polynomials of a given degree.

    Entry (a, b, c) is ``k!/(a! b! c!) * l1^a l2^b l3^c`` with a+b+c = k, in
    lexicographic exponent order.
    """

    def __init__(self, order: int):
        self.order = order
        self.exponents = tuple(
            (a, b, order - a - b) for a in range(order + 1) for b in range(order - a + 1)
        )
        self.factors = np.array(
            [
                math.factorial(order)
                / (math.factorial(a) * math.factorial(b) * math.factorial(c))
                for (a, b, c) in self.exponents
            ]
        )
        self.size = len(self.exponents)

    def evaluate(self, bary) -> np.ndarray:
        b = np.asarray(bary, dtype=float)
        cols = [
            f * b[..., 0] ** a * b[..., 1] ** bb * b[..., 2] ** c
            for f, (a, bb, c) in zip(self.factors, self.exponents)
        ]
        return np.stack(cols, axis=-1)


# ---------------------------------------------------------------------------
# quadratic closed form


@dataclass(frozen=True)
class QuadraticCoeffs:
    """Coefficients of the order-2 dual basis in terms of the density moments.

    With m1, m2 the first two moments and rho2 the squared norm of the monic
    degree-2 orthogonal polynomial:

        sigma_0 = (m1^2 - 1) / (3 m1^2 + 1),   sigma_+- = (m1 +- 1)^2 / (3 m1^2 + 1),
        tau = (1 - m2) / (rho2 (3 m1^2 + 1)),  nu_* = tau * (numerators of sigma_*).

    For a symmetric density (m1 = 0) these collapse to sigma_0 = -1,
    sigma_+- = 1, nu_0 = -tau, nu_+- = tau.
    """

    sigma0: float
    sigma_plus: float
    sigma_minus: float
    tau: float
    nu0: float
    nu_plus: float
    nu_minus: float
    rho2: float


def quadratic_coeffs(density: Density) -> QuadraticCoeffs:
    """Dual-basis coefficients of the order-2 scheme, from the density moments."""
    m1 = density.moment(1)
    m2 = density.moment(2)
    r2 = rho2_from_moments(density)
    denom = 3.0 * m1 * m1 + 1.0
    tau = (1.0 - m2) / (r2 * denom)
    return QuadraticCoeffs(
        sigma0=(m1 * m1 - 1.0) / denom,
        sigma_plus=(m1 + 1.0) ** 2 / denom,
        sigma_minus=(m1 - 1.0) ** 2 / denom,
        tau=tau,
        nu0=tau * (m1 * m1 - 1.0),
        nu_plus=tau * (m1 + 1.0) ** 2,
        nu_minus=tau * (m1 - 1.0) ** 2,
        rho2=r2,
    )


def quadratic_coeffs_jacobi(alpha: float, beta: float) -> QuadraticCoeffs:
    """Same coefficients expressed directly in the Jacobi parameters.

    Independent of the moment route; used to cross-check it.
    """
    d = alpha**2 - alpha * beta + beta**2 + alpha + beta + 1.0
    s = alpha + beta
    scale = (s + 3.0) * (s + 4.0) ** 2 * (s + 5.0) / (
        8.0 * (alpha + 2.0) * (beta + 2.0) * d
    )
    return QuadraticCoeffs(
        sigma0=-(alpha + 1.0) * (beta + 1.0) / d,
        sigma_plus=(beta + 1.0) ** 2 / d,
        sigma_minus=(alpha + 1.0) ** 2 / d,
        tau=(s + 2.0) ** 2 * scale / 4.0,
        nu0=-(alpha + 1.0) * (beta + 1.0) * scale,
        nu_plus=(beta + 1.0) ** 2 * scale,
        nu_minus=(alpha + 1.0) ** 2 * scale,
        rho2=rho2_jacobi(alpha, beta),
    )


# ---------------------------------------------------------------------------
# dual bases


@dataclass(frozen=True)
class LocalBasis:
    """K dual polynomials stored as coefficient rows over a declared basis.

    ``coeffs[r]`` holds the coefficients of dual polynomial r; functional i
    applied to dual polynomial j equals delta_ij (within quadrature
    tolerance).  ``kind`` records the construction route.
    """

    order: int
    kind: str  # "closed-form" | "matrix-inverse"
    poly_basis: object
    coeffs: np.ndarray

    def evaluate_duals(self, bary) -> np.ndarray:
        """Values of all K dual polynomials at barycentric point(s)."""
        return self.poly_basis.evaluate(bary) @ self.coeffs.T

    def dual_field(self, tri: Triangle, index: int):
        """Dual polynomial ``index`` as a callable field on a triangle."""
        row = self.coeffs[index]

        def f(x, y):
            p = np.stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)], axis=-1)
            return self.poly_basis.evaluate(tri.barycentric(p)) @ row

        return f


def quadratic_basis(density: Density) -> LocalBasis:
    """Closed-form dual basis of the order-2 scheme over the quadratic basis.

    Row j (j = 0, 1, 2) is the edge-mean dual ``sigma_0 l_j + sigma_+ l_{j+1}
    + sigma_- l_{j+2}``; row 3 + j is the edge-moment dual with the same
    linear pattern in nu and the pair term ``-(4 / rho2) l_{j+1} l_{j+2}``.
    """
    cf = quadratic_coeffs(density)
    coeffs = np.zeros((6, 6))
    for j in range(3):
        coeffs[j, j] = cf.sigma0
        coeffs[j, (j + 1) % 3] = cf.sigma_plus
        coeffs[j, (j + 2) % 3] = cf.sigma_minus
        coeffs[3 + j, j] = cf.nu0
        coeffs[3 + j, (j + 1) % 3] = cf.nu_plus
        coeffs[3 + j, (j + 2) % 3] = cf.nu_minus
        # pair l_{j+1} l_{j+2} sits at column 5 - j of the quadratic basis
        coeffs[3 + j, 5 - j] = -4.0 / cf.rho2
    return LocalBasis(
        order=2, kind="closed-form", poly_basis=BarycentricQuadraticBasis(), coeffs=coeffs
    )


@dataclass(frozen=True)
class DofMatrix:
    """Matrix of all functionals applied to all trial basis polynomials.

    Column j holds the K functionals of trial polynomial j.  The matrix
    depends only on the density and the order, not on the triangle shape.
    """

    matrix: np.ndarray
    condition: float
    poly_basis: object

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))


def _edge_barycentric(edge: int, nodes: np.ndarray) -> np.ndarray:
    bary = np.zeros((len(nodes), 3))
    bary[:, (edge + 1) % 3] = 0.5 * (1.0 + nodes)
    bary[:, (edge + 2) % 3] = 0.5 * (1.0 - nodes)
    return bary


def dof_matrix(scheme: Scheme, poly_basis=None) -> DofMatrix:
    """Assemble the DOF matrix of a scheme over a trial basis by quadrature."""
    if poly_basis is None:
        poly_basis = BernsteinBasis(scheme.order)
    if poly_basis.size != scheme.dof_count:
        raise ValueError(
            f"trial basis size {poly_basis.size} does not match {scheme.dof_count} functionals"
        )
    K = scheme.dof_count
    rows = np.zeros((K, K))
    pos = 0
    edge_basis_vals = [
        poly_basis.evaluate(_edge_barycentric(j, scheme.edge_rule.nodes)) for j in range(3)
    ]
    for j in range(3):
        rows[pos] = scheme.edge_rule.weights @ edge_basis_vals[j]
        pos += 1
    for m in range(2, scheme.order + 1):
        for j in range(3):
            rows[pos] = scheme.moment_weights[m] @ edge_basis_vals[j]
            pos += 1
    if scheme.order >= 3:
        interior_vals = poly_basis.evaluate(scheme.interior_rule.points)
        for ell in range(fn.interior_count(scheme.order)):
            rows[pos] = scheme.interior_weights[ell] @ interior_vals
            pos += 1
    cond = float(np.linalg.cond(rows))
    return DofMatrix(matrix=rows, condition=cond, poly_basis=poly_basis)


def general_basis(scheme: Scheme, poly_basis=None) -> LocalBasis:
    """Dual basis for any order: columns of the inverse DOF matrix.

    Raises
    ------
    UnisolvencyError
        If the DOF matrix condition estimate exceeds 1e12.
    """
    dm = dof_matrix(scheme, poly_basis)
    if not np.isfinite(dm.condition) or dm.condition > CONDITION_LIMIT:
        raise UnisolvencyError(
            f"DOF matrix condition {dm.condition:.3e} exceeds {CONDITION_LIMIT:.0e}"
        )
    inv = np.linalg.inv(dm.matrix)
    return LocalBasis(
        order=scheme.order, kind="matrix-inverse", poly_basis=dm.poly_basis, coeffs=inv.T
    )


def make_scheme(
    density: Density,
    order: int = 2,
    edge_points: int = fn.DEFAULT_EDGE_POINTS,
    basis_path: str = "auto",
    ortho=None,
) -> Scheme:
    """Build a ready-to-use scheme with its dual basis attached.

    ``basis_path`` selects the construction: "closed" (order 2 only),
    "matrix", or "auto" (closed form when the order is 2).
    """
    scheme = Scheme(density, order=order, edge_points=edge_points, ortho=ortho)
    if basis_path == "auto":
        basis_path = "closed" if order == 2 and ortho is None else "matrix"
    if basis_path == "closed":
        if order != 2:
            raise ValueError("the closed-form basis is only available at order 2")
        scheme.basis = quadratic_basis(density)
    elif basis_path == "matrix":
        scheme.basis = general_basis(scheme)
    else:
        raise ValueError(f"unknown basis path {basis_path!r}")
    return scheme


# ---------------------------------------------------------------------------
# reconstruction


@dataclass
class Reconstruction:
    """A piecewise-polynomial field over a mesh.

    Stores, per triangle, the DOF values of the target function and the
    resulting coefficients over ``poly_basis``.  The field is generally
    discontinuous across edges; evaluation on a shared edge resolves to the
    lowest incident triangle id.
    """

    mesh: Mesh
    poly_basis: object
    coeffs: np.ndarray
    dofs: np.ndarray
    info: dict = field(default_factory=dict)

    def evaluate(self, points) -> np.ndarray:
        """Field values at one or more points inside the mesh domain."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        idx = self.mesh.locate(p)
        bary = self.mesh.barycentric_for(idx, p)
        vals = np.einsum("mk,mk->m", self.poly_basis.evaluate(bary), self.coeffs[idx])
        return vals if np.asarray(points).ndim > 1 else float(vals[0])

    def evaluate_barycentric(self, bary) -> np.ndarray:
        """Values at fixed barycentric points of every triangle, (nt, m)."""
        basis_vals = self.poly_basis.evaluate(np.asarray(bary, dtype=float))
        return self.coeffs @ basis_vals.T


def _field_values(f, X, Y) -> np.ndarray:
    try:
        vals = np.asarray(f(X, Y), dtype=float)
    except Exception:
        vals = None
    if vals is None or vals.shape != np.shape(X):
        vals = np.vectorize(lambda x, y: float(f(x, y)))(X, Y)
    return vals


def _edge_quad_points(coords: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Gauss points of all local edges of all triangles, (nt, 3, q, 2)."""
    va = coords[:, [1, 2, 0], :][:, :, None, :]
    vb = coords[:, [2, 0, 1], :][:, :, None, :]
    wa = (0.5 * (1.0 + nodes))[None, None, :, None]
    wb = (0.5 * (1.0 - nodes))[None, None, :, None]
    return va * wa + vb * wb


def _dof_block(f, coords: np.ndarray, scheme: Scheme) -> np.ndarray:
    """DOF vectors of f for a block of triangles, (nt, K)."""
    pts = _edge_quad_points(coords, scheme.edge_rule.nodes)
    fv = _field_values(f, pts[..., 0], pts[..., 1])  # (nt, 3, q)
    blocks = [fv @ scheme.edge_rule.weights]
    for m in range(2, scheme.order + 1):
        blocks.append(fv @ scheme.moment_weights[m])
    if scheme.order >= 3:
        ipts = np.einsum("ib,tbx->tix", scheme.interior_rule.points, coords)
        fvi = _field_values(f, ipts[..., 0], ipts[..., 1])  # (nt, mi)
        blocks.append(fvi @ scheme.interior_weights.T)
    return np.concatenate(blocks, axis=1)


def _blockwise(worker, f, coords, scheme, n_jobs: int) -> np.ndarray:
    nt = len(coords)
    if n_jobs <= 1 or nt < 2 * n_jobs:
        return worker(f, coords, scheme)
    bounds = np.linspace(0, nt, n_jobs + 1, dtype=int)
    out = None
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        futures = [
            (lo, hi, pool.submit(worker, f, coords[lo:hi], scheme))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for lo, hi, fut in futures:
            block = fut.result()
            if out is None:
                out = np.empty((nt,) + block.shape[1:])
            out[lo:hi] = block
    return out


def reconstruct_local(f, tri: Triangle, scheme: Scheme) -> np.ndarray:
    """Coefficients of the local reconstruction of f on one triangle."""
    if scheme.basis is None:
        raise ValueError("scheme has no dual basis attached; use make_scheme")
    dofs = fn.dof_vector(f, tri, scheme)
    return dofs @ scheme.basis.coeffs


def reconstruct_global(f, mesh: Mesh, scheme: Scheme, n_jobs: int = 1) -> Reconstruction:
    """Per-triangle reconstruction of f over a whole mesh.

    Every triangle evaluates its own edge integrals with its own edge
    parametrization, so the result is independent of traversal order and of
    ``n_jobs``.
    """
    if scheme.basis is None:
        raise ValueError("scheme has no dual basis attached; use make_scheme")
    dofs = _blockwise(_dof_block, f, mesh.triangle_coords, scheme, n_jobs)
    coeffs = dofs @ scheme.basis.coeffs
    density = scheme.density
    info = {
        "kind": "enriched",
        "order": scheme.order,
        "density": density.label(),
        "alpha": getattr(density, "alpha", None),
        "beta": getattr(density, "beta", None),
    }
    return Reconstruction(
        mesh=mesh, poly_basis=scheme.basis.poly_basis, coeffs=coeffs, dofs=dofs, info=info
    )


_CH_COEFFS = np.array(
    [
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ]
)


def _ch_dof_block(f, coords: np.ndarray, scheme: Scheme) -> np.ndarray:
    pts = _edge_quad_points(coords, scheme.edge_rule.nodes)
    fv = _field_values(f, pts[..., 0], pts[..., 1])
    return fv @ scheme.edge_rule.weights


def classical_ch(f, mesh: Mesh, edge_points: int = fn.DEFAULT_EDGE_POINTS,
                 n_jobs: int = 1) -> Reconstruction:
    """Classical linear nonconforming reconstruction from plain edge means.

    Per triangle, the unique linear polynomial whose (unweighted) edge means
    match those of f; the dual basis is ``1 - 2 l_j``.
    """
    scheme = Scheme(UniformDensity(), order=2, edge_points=edge_points)
    dofs = _blockwise(_ch_dof_block, f, mesh.triangle_coords, scheme, n_jobs)
    coeffs = dofs @ _CH_COEFFS
    info = {"kind": "classical", "order": 1, "density": "uniform",
            "alpha": None, "beta": None}
    return Reconstruction(
        mesh=mesh, poly_basis=BarycentricLinearBasis(), coeffs=coeffs, dofs=dofs, info=info
    )


def duality_matrix(basis: LocalBasis, scheme: Scheme, tri: Triangle) -> np.ndarray:
    """Matrix [functional_i(dual_j)] computed on a physical triangle.

    Equals the identity for a valid dual basis; used as an independent check
    of both construction routes.
    """
    K = scheme.dof_count
    out = np.empty((K, K))
    for j in range(K):
        out[:, j] = fn.dof_vector(basis.dual_field(tri, j), tri, scheme)
    return out
