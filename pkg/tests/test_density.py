import math

import numpy as np
import pytest
from scipy.integrate import quad

from histopolation import (
    CustomDensity,
    GegenbauerDensity,
    JacobiDensity,
    MomentSequence,
    UniformDensity,
    beta_fn,
    jacobi_normalization,
)

PARAM_GRID = [-0.5, 0.0, 0.5, 1.0, 2.0, 5.0]


def quad_moment_oracle(alpha, beta, n):
    """Adaptive-quadrature moment, with the endpoint weight handled by QUADPACK."""
    a = jacobi_normalization(alpha, beta)
    val, _ = quad(lambda t: t**n, -1.0, 1.0, weight="alg", wvar=(beta, alpha))
    return a * val


def jacobi_moment_closed(alpha, beta, n):
    """The printed closed forms of the first four moments."""
    s = alpha + beta
    d = alpha - beta
    if n == 1:
        return -d / (s + 2)
    if n == 2:
        return (d**2 + (s + 2)) / ((s + 2) * (s + 3))
    if n == 3:
        return -d * (d**2 + 3 * s + 8) / ((s + 2) * (s + 3) * (s + 4))
    if n == 4:
        return (d**4 + 6 * d**2 * s + 20 * d**2 + 3 * s**2 + 18 * s + 24) / (
            (s + 2) * (s + 3) * (s + 4) * (s + 5)
        )
    raise ValueError(n)


class TestBetaFunction:
    def test_known_values(self):
        assert beta_fn(1.0, 1.0) == pytest.approx(1.0, abs=1e-15)
        # integral of u(1-u) over (0,1), computed by hand
        assert beta_fn(2.0, 2.0) == pytest.approx(1.0 / 6.0, rel=1e-14)
        assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)

    def test_symmetry_and_recurrence(self, rng):
        for _ in range(50):
            x, y = rng.uniform(1e-3, 10.0, size=2)
            assert beta_fn(x, y) == pytest.approx(beta_fn(y, x), rel=1e-13)
            assert beta_fn(x + 1.0, y) / beta_fn(x, y) == pytest.approx(
                x / (x + y), rel=1e-12
            )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            beta_fn(0.0, 1.0)
        with pytest.raises(ValueError):
            beta_fn(1.0, -2.0)


class TestNormalization:
    def test_uniform(self):
        assert jacobi_normalization(0.0, 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_symmetric_one(self):
        # 1 / (2^3 B(2,2)) = 6/8
        assert jacobi_normalization(1.0, 1.0) == pytest.approx(0.75, rel=1e-14)

    def test_integrates_to_one(self):
        a = jacobi_normalization(2.0, 0.0)
        val, _ = quad(lambda t: a * (1.0 - t) ** 2, -1.0, 1.0)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_grid_integrates_to_one(self):
        for alpha in PARAM_GRID:
            for beta in PARAM_GRID:
                a = jacobi_normalization(alpha, beta)
                val, _ = quad(lambda t: 1.0, -1.0, 1.0, weight="alg", wvar=(beta, alpha))
                assert a * val == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            jacobi_normalization(-1.0, 0.0)
        with pytest.raises(ValueError):
            JacobiDensity(0.0, -1.5)


class TestEvaluation:
    def test_uniform_value(self):
        d = UniformDensity()
        assert d(0.3) == 0.5
        assert np.all(d(np.linspace(-1, 1, 7)) == 0.5)

    def test_gegenbauer_at_origin(self):
        # value at 0 equals the normalization constant of (1,1)
        assert GegenbauerDensity(1.0)(0.0) == pytest.approx(0.75, rel=1e-14)

    def test_vanishes_at_endpoints_for_positive_exponents(self):
        d = JacobiDensity(2.0, 2.0)
        assert d(1.0) == 0.0
        assert d(-1.0) == 0.0

    def test_singular_endpoint_sentinel(self):
        d = JacobiDensity(-0.5, 0.0)
        assert np.isinf(d(1.0))

    def test_singular_endpoint_raise_mode(self):
        d = JacobiDensity(-0.5, 0.0, singular_endpoint="raise")
        with pytest.raises(ValueError):
            d(1.0)
        assert np.isfinite(d(0.99))

    def test_outside_interval(self):
        with pytest.raises(ValueError):
            UniformDensity()(1.5)


class TestMoments:
    def test_zeroth_moment_is_one(self, density):
        assert density.moment(0) == 1.0

    def test_uniform_values(self):
        d = UniformDensity()
        assert d.moment(2) == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert d.moment(4) == pytest.approx(1.0 / 5.0, abs=1e-15)

    def test_gegenbauer_odd_moments_vanish_exactly(self):
        d = GegenbauerDensity(1.7)
        for n in (1, 3, 5, 7, 11):
            assert d.moment(n) == 0.0

    def test_first_moment_one_sided(self):
        d = JacobiDensity(1.0, 0.0)
        assert d.moment(1) == pytest.approx(-1.0 / 3.0, rel=1e-14)
        assert d.moment(1) == pytest.approx(quad_moment_oracle(1.0, 0.0, 1), abs=1e-12)

    def test_closed_forms_over_grid(self):
        for alpha in PARAM_GRID:
            for beta in PARAM_GRID:
                d = JacobiDensity(alpha, beta)
                for n in (1, 2, 3, 4):
                    closed = jacobi_moment_closed(alpha, beta, n)
                    assert d.moment(n) == pytest.approx(closed, rel=1e-12, abs=1e-15)

    def test_against_quadrature_oracle(self):
        for alpha, beta in [(-0.5, 0.5), (1.0, 2.0), (5.0, 0.0)]:
            d = JacobiDensity(alpha, beta)
            for n in range(1, 7):
                assert d.moment(n) == pytest.approx(
                    quad_moment_oracle(alpha, beta, n), abs=1e-10
                )

    def test_bounded_by_one(self, density):
        for n in range(13):
            assert abs(density.moment(n)) <= 1.0 + 1e-15

    def test_negative_order_rejected(self, density):
        with pytest.raises(ValueError):
            density.moment(-1)


class TestMomentSequence:
    def test_lazy_extension_and_indexing(self):
        seq = MomentSequence(JacobiDensity(1.0, 0.5))
        assert seq[0] == 1.0
        assert seq[6] == pytest.approx(JacobiDensity(1.0, 0.5).moment(6), rel=1e-14)
        assert len(seq.upto(4)) == 5

    def test_hankel_positive_definite(self, density):
        MomentSequence(density).require_positive_definite(6)

    def test_hankel_failure_names_order(self):
        # point mass at t = 1: all moments equal 1, Hankel rank 1
        bad = CustomDensity(lambda t: np.ones_like(t) * 0.5, lambda n: 1.0, name="point")
        seq = MomentSequence(bad)
        with pytest.raises(ValueError, match="order 1"):
            seq.require_positive_definite(3)


class TestCustomDensity:
    def test_quadratic_density(self):
        # w(t) = 3 t^2 / 2: moments 3/(n+3) for even n, 0 for odd
        d = CustomDensity(
            lambda t: 1.5 * t**2,
            lambda n: 0.0 if n % 2 else 3.0 / (n + 3.0),
            name="quadratic",
        )
        assert d.moment(0) == 1.0
        assert d.moment(2) == pytest.approx(0.6, abs=1e-15)
        assert d(0.5) == pytest.approx(0.375)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="not normalized"):
            CustomDensity(lambda t: np.ones_like(t), lambda n: 2.0 if n == 0 else 0.0)

    def test_rejects_negative_pdf(self):
        with pytest.raises(ValueError, match="negative"):
            CustomDensity(lambda t: t, lambda n: 1.0 if n == 0 else 0.0)

    def test_requires_callables(self):
        with pytest.raises(TypeError):
            CustomDensity(None, lambda n: 1.0)
