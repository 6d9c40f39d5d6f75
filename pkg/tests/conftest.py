import numpy as np
import pytest

from histopolation import GegenbauerDensity, JacobiDensity, Triangle, UniformDensity


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


# six representative edge densities: uniform, symmetric, endpoint-singular,
# one-sided, mildly and strongly asymmetric
DENSITY_GRID = [
    UniformDensity(),
    GegenbauerDensity(2.0),
    JacobiDensity(-0.5, -0.5),
    JacobiDensity(1.0, 0.0),
    JacobiDensity(2.0, 0.5),
    JacobiDensity(5.0, 1.0),
]


@pytest.fixture(params=range(len(DENSITY_GRID)), ids=lambda i: DENSITY_GRID[i].label())
def density(request):
    return DENSITY_GRID[request.param]


def random_triangle(rng, scale=2.0, min_area=0.1):
    while True:
        verts = rng.uniform(-scale, scale, size=(3, 2))
        area = 0.5 * abs(
            (verts[1, 0] - verts[0, 0]) * (verts[2, 1] - verts[0, 1])
            - (verts[1, 1] - verts[0, 1]) * (verts[2, 0] - verts[0, 0])
        )
        if area >= min_area:
            return Triangle(verts)


def barycentric_field(tri, index):
    """The barycentric coordinate `index` of a triangle as a field f(x, y)."""

    def f(x, y):
        p = np.stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)], axis=-1)
        return tri.barycentric(p)[..., index]

    return f


def barycentric_product_field(tri, exponents):
    """Product of powers of the barycentric coordinates as a field f(x, y)."""

    def f(x, y):
        p = np.stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)], axis=-1)
        bary = tri.barycentric(p)
        out = np.ones_like(bary[..., 0])
        for i, e in enumerate(exponents):
            if e:
                out = out * bary[..., i] ** e
        return out

    return f


def random_poly2d(rng, degree):
    """Random bivariate polynomial of the given total degree, and its evaluator."""
    coeffs = rng.normal(size=(degree + 1, degree + 1))
    for i in range(degree + 1):
        for j in range(degree + 1):
            if i + j > degree:
                coeffs[i, j] = 0.0

    def f(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        acc = np.zeros(np.broadcast(x, y).shape)
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                acc = acc + coeffs[i, j] * x**i * y**j
        return acc

    return f
