"""Benchmark harness: test functions, Lp errors, convergence studies.

The error of a reconstruction is measured per triangle by splitting it into
s^2 congruent subtriangles and applying a degree-5 symmetric rule on each;
the composite rule is robust for |f - u|, which is not smooth across the
zero set of f - u.  All reductions run in a fixed order (triangle id, then
subtriangle) so repeated runs produce byte-identical CSV output.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from ._validation import resolve_density
from .mesh import Mesh, friedrichs_keller
from .operators import Reconstruction, classical_ch, make_scheme, reconstruct_global
from .triquad import composite_rule, triangle_rule

__all__ = [
    "TestFunction",
    "TEST_FUNCTIONS",
    "test_function",
    "lp_error",
    "RunConfig",
    "parse_config",
    "run_convergence",
    "ResultRow",
    "write_results_csv",
    "sample_reconstruction_csv",
]

DEFAULT_SUBDIVISIONS = 4


@dataclass(frozen=True)
class TestFunction:
    id: str
    fn: object
    description: str

    def __call__(self, x, y):
        return self.fn(x, y)


def _franke(x, y):
    # classical scattered-data benchmark, arguments mapped from [-1,1]^2 to [0,9]^2 via 9(s+1)/2
    gx = 9.0 * (x + 1.0) / 2.0
    gy = 9.0 * (y + 1.0) / 2.0
    return (
        0.75 * np.exp(-((gx - 2.0) ** 2) / 4.0 - ((gy - 2.0) ** 2) / 4.0)
        + 0.75 * np.exp(-((gx + 1.0) ** 2) / 49.0 - (gy + 1.0) / 10.0)
        + 0.5 * np.exp(-((gx - 7.0) ** 2) / 4.0 - ((gy - 3.0) ** 2) / 4.0)
        - 0.2 * np.exp(-((gx - 4.0) ** 2) - ((gy - 7.0) ** 2))
    )


TEST_FUNCTIONS: dict[str, TestFunction] = {
    tf.id: tf
    for tf in [
        TestFunction("f1", lambda x, y: np.sqrt(x**2 + y**2),
                     "distance cone, singular gradient at the origin"),
        TestFunction("f2", lambda x, y: np.exp(-4.0 * (x**2 + y**2)) * np.sin(np.pi * (x + y)),
                     "damped diagonal oscillation"),
        TestFunction("f3", lambda x, y: np.sin(2.0 * np.pi * x) * np.sin(2.0 * np.pi * y),
                     "product of sines"),
        TestFunction("f4", lambda x, y: np.sin(4.0 * np.pi * (x + y)),
                     "fast diagonal oscillation"),
        TestFunction("f5", lambda x, y: 1.0 / (25.0 * (x**2 + y**2) + 1.0),
                     "sharp rational peak at the origin"),
        TestFunction("f6", _franke, "Franke function"),
    ]
}


def test_function(fid: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[fid]
    except KeyError:
        known = ", ".join(sorted(TEST_FUNCTIONS))
        raise ValueError(f"unknown test function {fid!r}; known ids: {known}") from None


def lp_error(f, recon: Reconstruction, norm: str = "l1",
             subdivisions: int = DEFAULT_SUBDIVISIONS) -> float:
    """Lp norm of f minus the reconstruction over the mesh.

    norm is "l1", "l2" or "linf".  The quadrature is a degree-5 symmetric
    rule composited over subdivisions^2 subtriangles of every mesh triangle.
    """
    if norm not in ("l1", "l2", "linf"):
        raise ValueError(f"norm must be 'l1', 'l2' or 'linf', got {norm!r}")
    rule = composite_rule(triangle_rule(5), subdivisions)
    mesh = recon.mesh
    pts = np.einsum("ib,tbx->tix", rule.points, mesh.triangle_coords)  # (nt, m, 2)
    try:
        fv = np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float)
    except Exception:
        fv = None
    if fv is None or fv.shape != pts.shape[:2]:
        fv = np.vectorize(lambda x, y: float(f(x, y)))(pts[..., 0], pts[..., 1])
    uv = recon.evaluate_barycentric(rule.points)  # (nt, m)
    diff = np.abs(fv - uv)
    if norm == "linf":
        return float(diff.max())
    if norm == "l2":
        per_tri = diff**2 @ rule.weights
        return float(np.sqrt(np.dot(mesh.areas, per_tri)))
    per_tri = diff @ rule.weights
    return float(np.dot(mesh.areas, per_tri))


# ---------------------------------------------------------------------------
# experiment configuration and runner


@dataclass
class RunConfig:
    """Settings of a convergence run, parsed from a key = value text file.

    Keys: functions, levels, schemes, norm, edge_points, subdivisions,
    outdir, seed, timing, grid, tuning_functions, tuning_levels.
    Scheme specs: "ch", "uniform", "jacobi:A:B", "gegenbauer:G", "tuned".
    """

    functions: list[str]
    levels: list[int]
    schemes: list[str]
    outdir: str
    norm: str = "l1"
    edge_points: int = 16
    subdivisions: int = DEFAULT_SUBDIVISIONS
    seed: int = 0
    timing: bool = False
    grid: str = "default"
    tuning_functions: list[str] = field(default_factory=lambda: ["f1", "f3"])
    tuning_levels: list[int] = field(default_factory=lambda: [4, 9])
    n_jobs: int = 1

    def __post_init__(self):
        for fid in list(self.functions) + list(self.tuning_functions):
            test_function(fid)
        if not self.levels:
            raise ValueError("no mesh levels configured")
        if self.norm not in ("l1", "l2", "linf"):
            raise ValueError(f"unknown norm {self.norm!r}")
        for spec in self.schemes:
            if spec not in ("ch", "tuned"):
                resolve_density(spec)


def _parse_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_config(path) -> RunConfig:
    """Read a RunConfig from 'key = value' lines; '#' starts a comment."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    known = {
        "functions", "levels", "schemes", "norm", "edge_points", "subdivisions",
        "outdir", "seed", "timing", "grid", "tuning_functions", "tuning_levels",
        "n_jobs",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    for required in ("functions", "levels", "schemes", "outdir"):
        if required not in raw:
            raise ValueError(f"missing required configuration key {required!r}")
    kwargs = {
        "functions": _parse_list(raw["functions"]),
        "levels": [int(v) for v in _parse_list(raw["levels"])],
        "schemes": _parse_list(raw["schemes"]),
        "outdir": raw["outdir"],
    }
    if "norm" in raw:
        kwargs["norm"] = raw["norm"].lower()
    for key in ("edge_points", "subdivisions", "seed", "n_jobs"):
        if key in raw:
            kwargs[key] = int(raw[key])
    if "timing" in raw:
        kwargs["timing"] = raw["timing"].lower() in ("1", "on", "true", "yes")
    if "grid" in raw:
        kwargs["grid"] = raw["grid"]
    if "tuning_functions" in raw:
        kwargs["tuning_functions"] = _parse_list(raw["tuning_functions"])
    if "tuning_levels" in raw:
        kwargs["tuning_levels"] = [int(v) for v in _parse_list(raw["tuning_levels"])]
    return RunConfig(**kwargs)


@dataclass(frozen=True)
class ResultRow:
    function: str
    level: int
    triangles: int
    scheme: str
    alpha: float | None
    beta: float | None
    norm: str
    error: float
    seconds: float


def _scheme_runner(spec: str, config: RunConfig, meshes: dict[int, Mesh]):
    """Resolve a scheme spec to (label, alpha, beta, fit function)."""
    if spec == "ch":
        def run(f, mesh):
            return classical_ch(f, mesh, edge_points=config.edge_points,
                                n_jobs=config.n_jobs)
        return "ch", None, None, run
    if spec == "tuned":
        from .tuning import default_grid, grid_search, parse_grid_csv

        grid = default_grid() if config.grid == "default" else parse_grid_csv(config.grid)
        report = grid_search(
            grid,
            [test_function(fid) for fid in config.tuning_functions],
            [meshes.setdefault(n, friedrichs_keller(n)) for n in config.tuning_levels],
            norm=config.norm,
            edge_points=config.edge_points,
            subdivisions=config.subdivisions,
            n_jobs=config.n_jobs,
        )
        alpha, beta = report.best_pair
        scheme = make_scheme(resolve_density(f"jacobi:{alpha}:{beta}"),
                             edge_points=config.edge_points)

        def run(f, mesh):
            return reconstruct_global(f, mesh, scheme, n_jobs=config.n_jobs)
        return f"tuned(jacobi:{alpha:g}:{beta:g})", alpha, beta, run
    density = resolve_density(spec)
    scheme = make_scheme(density, edge_points=config.edge_points)

    def run(f, mesh):
        return reconstruct_global(f, mesh, scheme, n_jobs=config.n_jobs)
    return density.label(), getattr(density, "alpha", None), getattr(density, "beta", None), run


def run_convergence(config: RunConfig) -> list[ResultRow]:
    """Run the configured study and write results.csv, per-function SVG plots
    and report.txt into the output directory."""
    os.makedirs(config.outdir, exist_ok=True)
    meshes: dict[int, Mesh] = {}
    for n in config.levels:
        meshes[n] = friedrichs_keller(n)
    runners = [(spec, *_scheme_runner(spec, config, meshes)) for spec in config.schemes]
    rows: list[ResultRow] = []
    for fid in config.functions:
        f = test_function(fid)
        for n in config.levels:
            mesh = meshes[n]
            for spec, label, alpha, beta, run in runners:
                start = time.perf_counter()
                recon = run(f, mesh)
                err = lp_error(f, recon, norm=config.norm,
                               subdivisions=config.subdivisions)
                seconds = (time.perf_counter() - start) if config.timing else 0.0
                rows.append(ResultRow(
                    function=fid, level=n, triangles=mesh.n_triangles, scheme=label,
                    alpha=alpha, beta=beta, norm=config.norm, error=err,
                    seconds=seconds,
                ))
    write_results_csv(rows, os.path.join(config.outdir, "results.csv"))
    for fid in config.functions:
        _write_function_svg(rows, fid, config)
    _write_report(rows, config)
    return rows


def write_results_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("function,n,triangles,scheme,alpha,beta,norm,error,seconds\n")
        for r in rows:
            alpha = "" if r.alpha is None else repr(float(r.alpha))
            beta = "" if r.beta is None else repr(float(r.beta))
            fh.write(
                f"{r.function},{r.level},{r.triangles},{r.scheme},{alpha},{beta},"
                f"{r.norm},{r.error!r},{r.seconds:.6f}\n"
            )


def _write_function_svg(rows, fid: str, config: RunConfig) -> None:
    series = []
    for spec_label in dict.fromkeys(r.scheme for r in rows if r.function == fid):
        pts = [(r.triangles, r.error) for r in rows
               if r.function == fid and r.scheme == spec_label]
        series.append((spec_label, pts))
    path = os.path.join(config.outdir, f"{fid}.svg")
    write_semilog_svg(path, title=f"{fid}: {config.norm} error vs mesh size",
                      xlabel="triangles", ylabel=f"{config.norm} error", series=series)


def _write_report(rows, config: RunConfig) -> None:
    path = os.path.join(config.outdir, "report.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("convergence study\n")
        fh.write(f"norm = {config.norm}, subdivisions = {config.subdivisions}, "
                 f"edge_points = {config.edge_points}, seed = {config.seed}\n\n")
        for fid in config.functions:
            fh.write(f"{fid}: {test_function(fid).description}\n")
            for label in dict.fromkeys(r.scheme for r in rows if r.function == fid):
                sub = [r for r in rows if r.function == fid and r.scheme == label]
                fh.write(f"  {label}\n")
                prev = None
                for r in sub:
                    rate = ""
                    if prev is not None and r.error > 0 and prev.error > 0:
                        h_ratio = np.sqrt(r.triangles / prev.triangles)
                        rate = f"  rate {np.log(prev.error / r.error) / np.log(h_ratio):.2f}"
                    fh.write(f"    n={r.level:<4d} triangles={r.triangles:<6d} "
                             f"error={r.error:.6e}{rate}\n")
                    prev = r
            fh.write("\n")


def sample_reconstruction_csv(recon: Reconstruction, path, nx: int = 64, ny: int = 64) -> None:
    """Sample a reconstruction on a regular grid and write (x, y, value) CSV."""
    x0 = recon.mesh.vertices[:, 0].min()
    x1 = recon.mesh.vertices[:, 0].max()
    y0 = recon.mesh.vertices[:, 1].min()
    y1 = recon.mesh.vertices[:, 1].max()
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    vals = recon.evaluate(pts)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,value\n")
        for (x, y), v in zip(pts, vals):
            fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")


# ---------------------------------------------------------------------------
# self-contained SVG plotting (semi-log vertical axis)

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def write_semilog_svg(path, title: str, xlabel: str, ylabel: str, series,
                      width: int = 640, height: int = 480) -> None:
    """Write a small standalone SVG line plot with a log10 vertical axis.

    ``series`` is a list of (label, [(x, y), ...]) with positive y values.
    """
    margin_l, margin_r, margin_t, margin_b = 70, 20, 40, 50
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts if y > 0]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    xmin, xmax = min(xs), max(xs)
    if xmax == xmin:
        xmax = xmin + 1
    lo = np.floor(np.log10(min(ys)))
    hi = np.ceil(np.log10(max(ys)))
    if hi == lo:
        hi = lo + 1

    def sx(x):
        return margin_l + plot_w * (x - xmin) / (xmax - xmin)

    def sy(y):
        return margin_t + plot_h * (hi - np.log10(y)) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    # axes
    parts.append(
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>'
    )
    for k in range(int(lo), int(hi) + 1):
        yy = sy(10.0**k)
        parts.append(
            f'<line x1="{margin_l}" y1="{yy:.2f}" x2="{margin_l + plot_w}" y2="{yy:.2f}" '
            'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{margin_l - 6}" y="{yy + 4:.2f}" text-anchor="end">1e{k}</text>'
        )
    n_xticks = min(6, len(set(xs)))
    for x in np.linspace(xmin, xmax, n_xticks):
        xx = sx(x)
        parts.append(
            f'<line x1="{xx:.2f}" y1="{margin_t + plot_h}" x2="{xx:.2f}" '
            f'y2="{margin_t + plot_h + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{xx:.2f}" y="{margin_t + plot_h + 18}" text-anchor="middle">{x:.0f}</text>'
        )
    parts.append(
        f'<text x="{margin_l + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{margin_t + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {margin_t + plot_h / 2:.1f})">{ylabel}</text>'
    )
    # polylines and legend
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts if y > 0)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for x, y in pts:
            if y > 0:
                parts.append(
                    f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>'
                )
        ly = margin_t + 14 + 16 * i
        lx = margin_l + plot_w - 160
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 28}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
