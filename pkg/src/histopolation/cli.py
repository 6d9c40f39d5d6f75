"""Command-line interface.

Subcommands:
  mesh gen        generate a structured triangulation and write it to a file
  density sample  tabulate a Jacobi density as (t, w(t)) CSV
  tune            grid-search the Jacobi parameters on a validation set
  bench run       run a convergence study from a configuration file
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import parse_config, run_convergence, test_function
from .density import JacobiDensity
from .mesh import friedrichs_keller, write_mesh
from .tuning import default_grid, grid_search, parse_grid_csv

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histopolation",
        description="Reconstruction of bivariate functions from weighted edge integrals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mesh = sub.add_parser("mesh", help="mesh utilities")
    mesh_sub = mesh.add_subparsers(dest="mesh_command", required=True)
    gen = mesh_sub.add_parser("gen", help="generate a structured triangulation")
    gen.add_argument("--n", type=int, required=True, help="refinement level (>= 0)")
    gen.add_argument("--out", required=True, help="output mesh file")
    gen.add_argument("--domain", default="-1,-1,1,1",
                     help="rectangle as x0,y0,x1,y1 (default the unit square [-1,1]^2)")

    density = sub.add_parser("density", help="density utilities")
    density_sub = density.add_subparsers(dest="density_command", required=True)
    sample = density_sub.add_parser("sample", help="tabulate a Jacobi density")
    sample.add_argument("--alpha", type=float, required=True)
    sample.add_argument("--beta", type=float, required=True)
    sample.add_argument("--points", type=int, default=201)
    sample.add_argument("--out", required=True, help="output CSV file")

    tune = sub.add_parser("tune", help="grid-search the Jacobi parameters")
    tune.add_argument("--functions", default="f1,f3",
                      help="comma-separated test function ids")
    tune.add_argument("--levels", default="4,9",
                      help="comma-separated mesh refinement levels")
    tune.add_argument("--grid", default="default",
                      help="'default' or a CSV file of alpha,beta candidates")
    tune.add_argument("--norm", default="l1", choices=["l1", "l2", "linf"])
    tune.add_argument("--out", required=True, help="output report CSV")
    tune.add_argument("--jobs", type=int, default=1)
    tune.add_argument("--edge-points", type=int, default=16)
    tune.add_argument("--subdivisions", type=int, default=4)

    bench = sub.add_parser("bench", help="benchmark harness")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)
    run = bench_sub.add_parser("run", help="run a convergence study")
    run.add_argument("--config", required=True, help="configuration file")

    return parser


def _cmd_mesh_gen(args) -> int:
    domain = tuple(float(v) for v in args.domain.split(","))
    if len(domain) != 4:
        print("error: --domain expects x0,y0,x1,y1", file=sys.stderr)
        return 2
    mesh = friedrichs_keller(args.n, domain)
    write_mesh(mesh, args.out)
    print(f"wrote {mesh.n_triangles} triangles, {mesh.n_vertices} vertices to {args.out}")
    return 0


def _cmd_density_sample(args) -> int:
    if args.points < 2:
        print("error: --points must be at least 2", file=sys.stderr)
        return 2
    density = JacobiDensity(args.alpha, args.beta)
    ts = np.linspace(-1.0, 1.0, args.points)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("t,omega\n")
        for t in ts:
            fh.write(f"{float(t)!r},{float(density(float(t)))!r}\n")
    print(f"wrote {args.points} samples of {density.label()} to {args.out}")
    return 0


def _cmd_tune(args) -> int:
    functions = [test_function(fid) for fid in args.functions.split(",") if fid]
    levels = [int(v) for v in args.levels.split(",") if v]
    meshes = [friedrichs_keller(n) for n in levels]
    grid = default_grid() if args.grid == "default" else parse_grid_csv(args.grid)
    report = grid_search(grid, functions, meshes, norm=args.norm,
                         edge_points=args.edge_points,
                         subdivisions=args.subdivisions, n_jobs=args.jobs)
    report.to_csv(args.out)
    alpha, beta = report.best_pair
    print(f"best pair: alpha={alpha:g} beta={beta:g} "
          f"({args.norm} total error {report.best_error:.6e}); table in {args.out}")
    return 0


def _cmd_bench_run(args) -> int:
    config = parse_config(args.config)
    rows = run_convergence(config)
    print(f"wrote {len(rows)} result rows to {config.outdir}/results.csv")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "mesh":
            return _cmd_mesh_gen(args)
        if args.command == "density":
            return _cmd_density_sample(args)
        if args.command == "tune":
            return _cmd_tune(args)
        if args.command == "bench":
            return _cmd_bench_run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
