"""Monic orthogonal polynomials, the scalar rho2, and Gauss rules for a density.

Recurrence coefficients come from the standard closed forms for the Jacobi
family and from the moment-to-recurrence (Chebyshev) procedure for custom
densities.  Gauss rules are built Golub-Welsch style from the symmetric
tridiagonal recurrence matrix, which guarantees positive weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .density import Density, JacobiDensity

__all__ = [
    "MonicPolynomial",
    "OrthoBasis",
    "GaussRule",
    "MomentConditioningError",
    "monic_pi2",
    "rho2",
    "rho2_jacobi",
    "rho2_gegenbauer",
    "tau_gegenbauer",
    "monic_sequence",
    "gauss_rule",
    "jacobi_recurrence",
    "recurrence_from_moments",
    "recurrence_coefficients",
]

MAX_ORDER = 8


class MomentConditioningError(ValueError):
    """Raised when moment data cannot support the requested polynomial order."""

    def __init__(self, order: int, detail: str = ""):
        self.order = order
        msg = f"moment data is numerically singular at order {order}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class MonicPolynomial:
    """Univariate polynomial with unit leading coefficient.

    Coefficients are stored in ascending powers of t; the last entry is
    exactly 1.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if coeffs[-1] != 1.0:
            raise ValueError("leading coefficient must be exactly 1")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coefficients)


def jacobi_recurrence(alpha: float, beta: float, n: int):
    """Monic three-term recurrence coefficients for the normalized Jacobi density.

    Returns arrays (a, b) of length n with ``pi_{k+1} = (t - a_k) pi_k - b_k pi_{k-1}``
    and ``b_0 = 1`` (the density has unit mass).
    """
    if n < 1:
        raise ValueError("need at least one recurrence coefficient")
    a = np.zeros(n)
    b = np.zeros(n)
    apb = alpha + beta
    a[0] = (beta - alpha) / (apb + 2.0)
    b[0] = 1.0
    if n > 1:
        a[1] = (beta**2 - alpha**2) / ((apb + 2.0) * (apb + 4.0))
        b[1] = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((apb + 2.0) ** 2 * (apb + 3.0))
    for k in range(2, n):
        two_k = 2.0 * k + apb
        a[k] = (beta**2 - alpha**2) / (two_k * (two_k + 2.0))
        b[k] = (
            4.0
            * k
            * (k + alpha)
            * (k + beta)
            * (k + apb)
            / (two_k**2 * (two_k**2 - 1.0))
        )
    return a, b


def recurrence_from_moments(moments, n: int):
    """Recurrence coefficients from raw moments m_0 .. m_{2n-1}.

    Implements the classical moment-to-recurrence triangular scheme.  The
    procedure is numerically fragile for large n; a nonpositive norm ratio
    raises :class:`MomentConditioningError` naming the failing order.
    """
    m = np.asarray(moments, dtype=float)
    if len(m) < 2 * n:
        raise ValueError(f"need {2 * n} moments for {n} recurrence coefficients")
    a = np.zeros(n)
    b = np.zeros(n)
    a[0] = m[1] / m[0]
    b[0] = m[0]
    if n == 1:
        return a, b
    sig_prev = np.zeros(2 * n)
    sig_curr = m[: 2 * n].copy()
    for j in range(1, n):
        sig_next = np.zeros(2 * n)
        for ell in range(j, 2 * n - j):
            sig_next[ell] = (
                sig_curr[ell + 1] - a[j - 1] * sig_curr[ell] - b[j - 1] * sig_prev[ell]
            )
        if not np.isfinite(sig_next[j]) or sig_next[j] <= 0.0:
            raise MomentConditioningError(j, f"norm estimate {sig_next[j]}")
        a[j] = sig_next[j + 1] / sig_next[j] - sig_curr[j] / sig_curr[j - 1]
        b[j] = sig_next[j] / sig_curr[j - 1]
        if b[j] <= 0.0 or not np.isfinite(b[j]):
            raise MomentConditioningError(j, f"recurrence coefficient b_{j} = {b[j]}")
        sig_prev, sig_curr = sig_curr, sig_next
    return a, b


def recurrence_coefficients(density: Density, n: int):
    """Dispatch: closed-form recurrence for Jacobi kinds, moment path otherwise."""
    if isinstance(density, JacobiDensity):
        return jacobi_recurrence(density.alpha, density.beta, n)
    return recurrence_from_moments(density.moments(max(2 * n - 1, 1)), n)


def _polys_from_recurrence(a, b, k: int) -> tuple[MonicPolynomial, ...]:
    coeff_rows = [np.array([1.0])]
    if k >= 1:
        coeff_rows.append(np.array([-a[0], 1.0]))
    for n in range(1, k):
        prev, prev2 = coeff_rows[n], coeff_rows[n - 1]
        nxt = np.zeros(n + 2)
        nxt[1:] += prev
        nxt[: n + 1] -= a[n] * prev
        nxt[:n] -= b[n] * prev2
        coeff_rows.append(nxt)
    return tuple(MonicPolynomial(c) for c in coeff_rows)


@dataclass(frozen=True)
class OrthoBasis:
    """Monic orthogonal polynomials pi_0 .. pi_k for a density.

    Attributes
    ----------
    density : Density
    order : int
        Highest polynomial degree k.
    recurrence_a, recurrence_b : np.ndarray
        Monic three-term recurrence coefficients (b_0 = 1).
    polys : tuple[MonicPolynomial, ...]
        The polynomials pi_0 .. pi_k in the monomial basis.
    norms_sq : np.ndarray
        Squared weighted norms ``<pi_n, pi_n>``; entry 2 equals rho2 because
        ``<pi_2, t^2> = <pi_2, pi_2>`` by orthogonality.
    """

    density: Density
    order: int
    recurrence_a: np.ndarray
    recurrence_b: np.ndarray
    polys: tuple[MonicPolynomial, ...]
    norms_sq: np.ndarray

    @property
    def rho2(self) -> float:
        if self.order < 2:
            raise ValueError("rho2 requires polynomials up to degree 2")
        return float(self.norms_sq[2])


def monic_sequence(density: Density, k: int) -> OrthoBasis:
    """Construct the monic orthogonal sequence pi_0 .. pi_k.

    Raises
    ------
    MomentConditioningError
        If the moment data cannot support the requested order.
    """
    if k < 0:
        raise ValueError("polynomial order must be nonnegative")
    if k > MAX_ORDER:
        raise ValueError(f"polynomial order capped at {MAX_ORDER}, got {k}")
    # norms_sq[n] = b_0 * ... * b_n, so coefficients through index k are needed
    a, b = recurrence_coefficients(density, k + 1)
    polys = _polys_from_recurrence(a, b, k)
    norms_sq = np.cumprod(b[: k + 1])
    return OrthoBasis(
        density=density,
        order=k,
        recurrence_a=a,
        recurrence_b=b,
        polys=polys,
        norms_sq=norms_sq,
    )


def monic_pi2(density: Density) -> MonicPolynomial:
    """The monic degree-2 orthogonal polynomial ``t^2 - a t - b`` from moments.

    Orthogonality against 1 and t fixes
    ``a = (m3 - m1 m2) / (m2 - m1^2)`` and ``b = m2 - a m1``.
    """
    m1, m2, m3 = (density.moment(i) for i in (1, 2, 3))
    variance = m2 - m1 * m1
    if variance <= 1e-14:
        raise ValueError(f"degenerate density: m2 - m1^2 = {variance}")
    a = (m3 - m1 * m2) / variance
    b = m2 - a * m1
    return MonicPolynomial(np.array([-b, -a, 1.0]))


def rho2(density: Density) -> float:
    """The projection ``<pi_2, t^2>`` expressed through the first four moments.

    ``rho2 = m4 - m2^2 - (m3 - m1 m2)^2 / (m2 - m1^2)``; positive for any
    density whose support is not a two-point set.
    """
    m1, m2, m3, m4 = (density.moment(i) for i in (1, 2, 3, 4))
    variance = m2 - m1 * m1
    if variance <= 1e-14:
        raise ValueError(f"degenerate density: m2 - m1^2 = {variance}")
    value = m4 - m2 * m2 - (m3 - m1 * m2) ** 2 / variance
    if value <= 1e-14:
        raise ValueError(f"degenerate density: rho2 = {value}")
    return value


def rho2_jacobi(alpha: float, beta: float) -> float:
    """Closed form of rho2 for the Jacobi density in terms of (alpha, beta)."""
    s = alpha + beta
    return (
        32.0
        * (alpha + 1.0)
        * (alpha + 2.0)
        * (beta + 1.0)
        * (beta + 2.0)
        / ((s + 2.0) * (s + 3.0) ** 2 * (s + 4.0) ** 2 * (s + 5.0))
    )


def rho2_gegenbauer(gamma: float) -> float:
    """Closed form of rho2 for the symmetric family: 4(g+1) / ((2g+3)^2 (2g+5))."""
    return 4.0 * (gamma + 1.0) / ((2.0 * gamma + 3.0) ** 2 * (2.0 * gamma + 5.0))


def tau_gegenbauer(gamma: float) -> float:
    """Closed form of (1 - m2) / rho2 for the symmetric family: (2g+3)(2g+5)/2."""
    return (2.0 * gamma + 3.0) * (2.0 * gamma + 5.0) / 2.0


@dataclass(frozen=True)
class GaussRule:
    """Gauss quadrature rule with respect to a probability density on [-1, 1].

    ``sum(weights * f(nodes))`` integrates ``f`` against the density exactly
    for polynomials of degree <= 2q - 1.  Weights are positive and sum to 1;
    nodes are strictly increasing and strictly inside (-1, 1).
    """

    nodes: np.ndarray
    weights: np.ndarray
    density: Density

    @property
    def q(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_rule(density: Density, q: int) -> GaussRule:
    """Build the q-point Gauss rule for a density (Golub-Welsch).

    The nodes are the eigenvalues of the symmetric tridiagonal recurrence
    matrix and the weights the squared first components of its normalized
    eigenvectors, scaled by the total mass m_0 = 1.
    """
    if q < 1:
        raise ValueError("Gauss rule needs at least one node")
    a, b = recurrence_coefficients(density, q)
    if q == 1:
        nodes = np.array([a[0]])
        weights = np.array([1.0])
    else:
        offdiag = np.sqrt(b[1:q])
        nodes, vecs = scipy.linalg.eigh_tridiagonal(a[:q], offdiag)
        weights = b[0] * vecs[0, :] ** 2
    if np.any(weights <= 0.0):
        raise MomentConditioningError(q, "nonpositive Gauss weight")
    if nodes[0] <= -1.0 or nodes[-1] >= 1.0:
        raise MomentConditioningError(q, "Gauss node outside (-1, 1)")
    return GaussRule(nodes=nodes, weights=weights, density=density)
