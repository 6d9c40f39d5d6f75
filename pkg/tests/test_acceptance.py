"""Acceptance suite.

Each test prints one PASS/FAIL line (run with -s to see them).  The criteria
combine exact formula checks, quadrature-based cross-checks on random
geometry, operator reproduction, convergence-rate bands, and the ordinal
comparison of the tuned weighted scheme against the classical baseline.
"""

import time

import numpy as np
from scipy.integrate import quad

from histopolation import (
    GegenbauerDensity,
    JacobiDensity,
    Scheme,
    UniformDensity,
    classical_ch,
    dof_matrix,
    duality_matrix,
    friedrichs_keller,
    general_basis,
    grid_search,
    jacobi_normalization,
    lp_error,
    make_scheme,
    monic_pi2,
    quadratic_basis,
    quadratic_coeffs,
    reconstruct_global,
    reconstruct_local,
    rho2,
    rho2_gegenbauer,
    rho2_jacobi,
    tau_gegenbauer,
)
from histopolation.bench import test_function as bench_function
from histopolation.operators import BarycentricQuadraticBasis
from histopolation.orthopoly import gauss_rule
from histopolation.tuning import default_grid

from conftest import (
    DENSITY_GRID,
    barycentric_field,
    barycentric_product_field,
    random_poly2d,
    random_triangle,
)

PARAM_GRID = [-0.5, 0.0, 0.5, 1.0, 2.0, 5.0]
BENCH_LEVELS = (20, 30, 40, 50)
TUNING_LEVELS = (4, 9)
TUNING_FUNCTIONS = ("f1", "f3")


def _report(num, name, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[acceptance {num}] {name}: {status}{suffix}")
    assert passed, f"criterion {num} ({name}) failed: {detail}"


def _moment_closed(alpha, beta, n):
    s, d = alpha + beta, alpha - beta
    return {
        1: -d / (s + 2),
        2: (d**2 + (s + 2)) / ((s + 2) * (s + 3)),
        3: -d * (d**2 + 3 * s + 8) / ((s + 2) * (s + 3) * (s + 4)),
        4: (d**4 + 6 * d**2 * s + 20 * d**2 + 3 * s**2 + 18 * s + 24)
        / ((s + 2) * (s + 3) * (s + 4) * (s + 5)),
    }[n]


def test_criterion_1_moment_closed_forms():
    start = time.perf_counter()
    worst_closed = 0.0
    worst_quad = 0.0
    for alpha in PARAM_GRID:
        for beta in PARAM_GRID:
            d = JacobiDensity(alpha, beta)
            a_norm = jacobi_normalization(alpha, beta)
            for n in (1, 2, 3, 4):
                closed = _moment_closed(alpha, beta, n)
                got = d.moment(n)
                scale = max(1.0, abs(closed))
                worst_closed = max(worst_closed, abs(got - closed) / scale)
                oracle, _ = quad(lambda t: t**n, -1.0, 1.0, weight="alg",
                                 wvar=(beta, alpha))
                worst_quad = max(worst_quad, abs(got - a_norm * oracle))
    elapsed = time.perf_counter() - start
    _report(
        1, "moment closed forms",
        worst_closed <= 1e-12 and worst_quad <= 1e-10,
        f"closed-form dev {worst_closed:.2e}, quadrature dev {worst_quad:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_rho2_three_paths():
    start = time.perf_counter()
    worst = 0.0
    for alpha in PARAM_GRID:
        for beta in PARAM_GRID:
            d = JacobiDensity(alpha, beta)
            from_moments = rho2(d)
            from_params = rho2_jacobi(alpha, beta)
            p2 = monic_pi2(d)
            rule = gauss_rule(d, 8)
            from_quadrature = rule.integrate(lambda t: p2(t) * t**2)
            worst = max(
                worst,
                abs(from_moments - from_params),
                abs(from_moments - from_quadrature),
            )
    worst_gegen = 0.0
    for gamma in (0.0, 0.5, 1.0, 3.0):
        d = GegenbauerDensity(gamma)
        worst_gegen = max(
            worst_gegen,
            abs(rho2(d) - rho2_gegenbauer(gamma)),
            abs((1.0 - d.moment(2)) / rho2(d) - tau_gegenbauer(gamma)),
            abs(rho2_jacobi(gamma, gamma) - rho2_gegenbauer(gamma)),
        )
    elapsed = time.perf_counter() - start
    _report(
        2, "rho2 path agreement",
        worst <= 1e-10 and worst_gegen <= 1e-10,
        f"jacobi dev {worst:.2e}, symmetric dev {worst_gegen:.2e}, {elapsed:.2f}s",
    )


def test_criterion_3_edge_functional_reference_values():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    triangles = [random_triangle(rng) for _ in range(20)]
    for density in DENSITY_GRID:
        scheme = Scheme(density)
        m1, m2 = density.moment(1), density.moment(2)
        r2 = rho2(density)
        for tri in triangles:
            from histopolation import edge_mean, edge_moment

            for j in range(3):
                cases = []
                # means of single coordinates
                cases.append((edge_mean(barycentric_field(tri, j), tri, j,
                                        scheme.edge_rule), 0.0))
                cases.append((edge_mean(barycentric_field(tri, (j + 1) % 3), tri, j,
                                        scheme.edge_rule), (1 + m1) / 2))
                cases.append((edge_mean(barycentric_field(tri, (j + 2) % 3), tri, j,
                                        scheme.edge_rule), (1 - m1) / 2))
                # means of coordinate products
                for i in range(3):
                    for k in range(3):
                        exps = [0, 0, 0]
                        exps[i] += 1
                        exps[k] += 1
                        f = barycentric_product_field(tri, exps)
                        got = edge_mean(f, tri, j, scheme.edge_rule)
                        if i == j or k == j:
                            expected = 0.0
                        elif i == k:
                            sign = 1.0 if i == (j + 1) % 3 else -1.0
                            expected = (1 + 2 * sign * m1 + m2) / 4
                        else:
                            expected = (1 - m2) / 4
                        cases.append((got, expected))
                        # weighted moments of distinct-coordinate products
                        if i != k:
                            got_m = edge_moment(f, tri, j, 2, scheme.ortho,
                                                scheme.edge_rule)
                            expected_m = 0.0 if (i == j or k == j) else -r2 / 4
                            cases.append((got_m, expected_m))
                # moments annihilate affine fields
                for i in range(3):
                    cases.append((edge_moment(barycentric_field(tri, i), tri, j, 2,
                                              scheme.ortho, scheme.edge_rule), 0.0))
                worst = max(worst, max(abs(g - e) for g, e in cases))
    elapsed = time.perf_counter() - start
    _report(
        3, "edge functional reference values (20 triangles x 6 densities)",
        worst <= 1e-11, f"worst dev {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_4_determinant_law():
    start = time.perf_counter()
    worst = 0.0
    for density in DENSITY_GRID + [JacobiDensity(a, b) for a, b in
                                   ((-0.5, 1.0), (0.0, 3.0), (3.0, -0.5), (1.0, 2.0))]:
        dm = dof_matrix(Scheme(density), BarycentricQuadraticBasis())
        m1 = density.moment(1)
        expected = rho2(density) ** 3 * (3 * m1 * m1 + 1.0) / 256.0
        worst = max(worst, abs(dm.determinant - expected) / abs(expected))
    elapsed = time.perf_counter() - start
    _report(4, "determinant law", worst <= 1e-9, f"worst rel dev {worst:.2e}, {elapsed:.2f}s")


def test_criterion_5_basis_paths_and_duality():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    lattice = []
    m = 6
    for i in range(m + 1):
        for j in range(m + 1 - i):
            lattice.append((i / m, j / m, (m - i - j) / m))
    lattice = np.array(lattice)
    worst_path = 0.0
    worst_dual = 0.0
    for alpha in (-0.5, 0.0, 0.5, 1.0, 2.0, 5.0):
        for beta in (-0.5, 0.0, 1.0, 3.0):
            d = JacobiDensity(alpha, beta)
            scheme = Scheme(d)
            closed = quadratic_basis(d)
            inverse = general_basis(scheme)
            dev = np.abs(closed.evaluate_duals(lattice) - inverse.evaluate_duals(lattice))
            worst_path = max(worst_path, float(dev.max()))
            tri = random_triangle(rng)
            for basis in (closed, inverse):
                dual_dev = np.abs(duality_matrix(basis, scheme, tri) - np.eye(6))
                worst_dual = max(worst_dual, float(dual_dev.max()))
    # symmetric densities: the edge-mean duals are exactly 1 - 2 l_j in coefficients
    exact = True
    for gamma in (0.0, 1.0, 3.0):
        cf = quadratic_coeffs(GegenbauerDensity(gamma))
        exact &= cf.sigma0 == -1.0 and cf.sigma_plus == 1.0 and cf.sigma_minus == 1.0
        rows = quadratic_basis(GegenbauerDensity(gamma)).coeffs[:3]
        for j in range(3):
            expected = np.zeros(6)
            expected[j], expected[(j + 1) % 3], expected[(j + 2) % 3] = -1.0, 1.0, 1.0
            exact &= bool(np.array_equal(rows[j], expected))
    elapsed = time.perf_counter() - start
    _report(
        5, "dual basis: path equivalence, duality, symmetric simplification",
        worst_path <= 1e-9 and worst_dual <= 1e-9 and exact,
        f"path dev {worst_path:.2e}, duality dev {worst_dual:.2e}, "
        f"exact symmetric coefficients {exact}, {elapsed:.2f}s",
    )


def test_criterion_6_polynomial_reproduction():
    start = time.perf_counter()
    rng = np.random.default_rng(13)
    densities = [UniformDensity(), JacobiDensity(1.0, 0.0), JacobiDensity(2.0, 0.5),
                 GegenbauerDensity(2.0)]
    worst = 0.0
    for order in (2, 3):
        for density in densities:
            scheme = make_scheme(density, order=order)
            tris = [random_triangle(rng) for _ in range(20)]
            for _ in range(50):
                p = random_poly2d(rng, order)
                tri = tris[rng.integers(len(tris))]
                coeffs = reconstruct_local(p, tri, scheme)
                bary = rng.uniform(0, 1, size=(20, 3))
                bary /= bary.sum(axis=1, keepdims=True)
                xy = tri.from_barycentric(bary)
                vals = scheme.basis.poly_basis.evaluate(bary) @ coeffs
                worst = max(worst, float(np.abs(vals - p(xy[:, 0], xy[:, 1])).max()))
    elapsed = time.perf_counter() - start
    _report(
        6, "polynomial reproduction (orders 2 and 3, 50 random targets each)",
        worst <= 1e-8, f"worst pointwise dev {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_7_convergence_orders():
    start = time.perf_counter()
    f3 = bench_function("f3")
    scheme = make_scheme(UniformDensity())
    errs_w, errs_c = [], []
    for n in (9, 19, 39):
        mesh = friedrichs_keller(n)
        errs_w.append(lp_error(f3, reconstruct_global(f3, mesh, scheme)))
        errs_c.append(lp_error(f3, classical_ch(f3, mesh)))
    ratios_w = [errs_w[0] / errs_w[1], errs_w[1] / errs_w[2]]
    ratios_c = [errs_c[0] / errs_c[1], errs_c[1] / errs_c[2]]
    ok = all(6.0 <= r <= 10.0 for r in ratios_w) and all(3.0 <= r <= 5.0 for r in ratios_c)
    elapsed = time.perf_counter() - start
    _report(
        7, "convergence orders (weighted ~h^3, classical ~h^2)",
        ok,
        f"weighted ratios {ratios_w[0]:.2f}/{ratios_w[1]:.2f}, "
        f"classical {ratios_c[0]:.2f}/{ratios_c[1]:.2f}, {elapsed:.1f}s",
    )


def _tuned_pair():
    functions = [bench_function(fid) for fid in TUNING_FUNCTIONS]
    meshes = [friedrichs_keller(n) for n in TUNING_LEVELS]
    return grid_search(default_grid(), functions, meshes, norm="l1")


def test_criterion_8_tuned_scheme_beats_classical_everywhere():
    start = time.perf_counter()
    report = _tuned_pair()
    alpha, beta = report.best_pair
    tuned = make_scheme(JacobiDensity(alpha, beta))
    violations = []
    for n in BENCH_LEVELS:
        mesh = friedrichs_keller(n)
        assert mesh.n_triangles == 2 * (n + 1) ** 2
        for fid in ("f1", "f2", "f3", "f4", "f5", "f6"):
            f = bench_function(fid)
            err_t = lp_error(f, reconstruct_global(f, mesh, tuned))
            err_c = lp_error(f, classical_ch(f, mesh))
            if not err_t < err_c:
                violations.append((fid, n, err_t, err_c))
    elapsed = time.perf_counter() - start
    _report(
        8, "tuned weighted scheme strictly below classical (6 functions x 4 levels)",
        not violations,
        f"tuned (alpha, beta) = ({alpha:g}, {beta:g}), levels {BENCH_LEVELS}, "
        f"violations {violations}, {elapsed:.1f}s",
    )


def test_criterion_9_grid_search_fidelity():
    start = time.perf_counter()
    functions = [bench_function(fid) for fid in TUNING_FUNCTIONS]
    meshes = [friedrichs_keller(n) for n in TUNING_LEVELS]
    seq = grid_search(default_grid(), functions, meshes, n_jobs=1)
    par = grid_search(default_grid(), functions, meshes, n_jobs=4)
    rescan_ok = seq.best_pair == seq.rescan_argmin()
    table_ok = seq.table == par.table and seq.best_pair == par.best_pair
    first_min = next(
        (a, b) for a, b, e in seq.table if e == min(row[2] for row in seq.table)
    )
    first_ok = seq.best_pair == first_min
    elapsed = time.perf_counter() - start
    _report(
        9, "grid search fidelity (rescan oracle, parallel equivalence)",
        rescan_ok and table_ok and first_ok,
        f"best {seq.best_pair}, table rows {len(seq.table)}, {elapsed:.1f}s",
    )
