"""Command-line interface.

Subcommands: interpolate, smooth-exact, smooth-approx, eval, study.
Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .approx_smoother import compare, fit_approx, make_grid, parse_grid
from .errors import BfsmoothError, InputError, ParseError, SolveError
from .exact_smoother import diagnostics, fit_exact
from .interpolant import eval_model, fit_interpolant
from .kernels import parse_kernel, predicted_orders
from .polyspace import PolyFrame
from .study import (
    Region,
    RhoCoupling,
    SweepConfig,
    convergence_sweep,
    density_law,
    exponential_sizes,
    grid_error_fn,
    residual_error_fn,
    rho_search,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

DATA_FUNCTIONS = {
    "sin": lambda x: float(np.sin(np.sum(np.atleast_1d(x)))),
    "cos": lambda x: float(np.cos(np.sum(np.atleast_1d(x)))),
    "exp": lambda x: float(np.exp(-np.sum(np.atleast_1d(x) ** 2))),
    "runge": lambda x: float(1.0 / (1.0 + 25.0 * np.sum(np.atleast_1d(x) ** 2))),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfsmooth",
        description="Scattered-data interpolation and smoothing with "
        "positive-order basis functions.",
    )
    parser.add_argument("--seed", type=int, default=0, help="PRNG seed")
    parser.add_argument("--out", type=str, default=None, help="output file")
    parser.add_argument("--quiet", action="store_true", help="suppress chatter")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fit_args(p, rho=False):
        p.add_argument("--data", required=True, help="CSV data file")
        p.add_argument("--kernel", required=True, help="kernel spec, e.g. thinplate:s=1.5")
        p.add_argument("--theta", required=True, type=int, help="polynomial order")
        if rho:
            p.add_argument("--rho", required=True, type=float, help="smoothing parameter")
        p.add_argument("--eval", dest="eval_spec", default=None,
                       help="grid spec a:b:n or a point CSV file")
        p.add_argument("--save", default=None, help="save fitted model to file")

    p = sub.add_parser("interpolate", help="fit the minimal-seminorm interpolant")
    add_fit_args(p)

    p = sub.add_parser("smooth-exact", help="fit the Exact smoother")
    add_fit_args(p, rho=True)
    p.add_argument("--diagnostics", action="store_true",
                   help="print the smoother energy-identity checks")

    p = sub.add_parser("smooth-approx", help="fit the Approximate smoother")
    add_fit_args(p, rho=True)
    p.add_argument("--grid", required=True, help="center grid spec a:b:n")
    p.add_argument("--compare-exact", action="store_true",
                   help="also fit the Exact smoother and report the gap identity")

    p = sub.add_parser("eval", help="evaluate a saved model")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--eval", dest="eval_spec", required=True,
                   help="grid spec a:b:n or a point CSV file")

    p = sub.add_parser("study", help="run a study harness command")
    study_sub = p.add_subparsers(dest="study_command", required=True)

    q = study_sub.add_parser("density", help="fit the empirical density law")
    q.add_argument("--region", default="-1.5:1.5", help="box spec a1,..:b1,..")
    q.add_argument("--max-size", type=int, default=5000)
    q.add_argument("--n-sizes", type=int, default=20)
    q.add_argument("--multiplier", type=float, default=1.2)

    q = study_sub.add_parser("convergence", help="measure convergence order")
    q.add_argument("--kernel", required=True)
    q.add_argument("--theta", required=True, type=int)
    q.add_argument("--region", default="-1.5:1.5")
    q.add_argument("--data-fn", default="sin", choices=sorted(DATA_FUNCTIONS))
    q.add_argument("--mode", default="interpolant",
                   choices=["interpolant", "exact", "approx"])
    q.add_argument("--sizes", default="50,100,200,400,800,1600",
                   help="comma-separated point counts")
    q.add_argument("--rho", type=float, default=None)
    q.add_argument("--couple", action="store_true",
                   help="couple rho to the fill distance")
    q.add_argument("--couple-a", type=float, default=0.81)
    q.add_argument("--grid", default=None, help="approx-mode center grid a:b:n")

    q = study_sub.add_parser("rho-search", help="search for the best rho")
    q.add_argument("--data", required=True)
    q.add_argument("--kernel", required=True)
    q.add_argument("--theta", required=True, type=int)
    q.add_argument("--grid", required=True, help="center grid spec a:b:n")
    q.add_argument("--rho0", type=float, default=1.0)
    q.add_argument("--factor", type=float, default=10.0)
    q.add_argument("--error-grid", default=None,
                   help="error grid spec for the data-function criterion")
    q.add_argument("--data-fn", default=None, choices=sorted(DATA_FUNCTIONS))

    return parser


def _parse_region(text: str) -> Region:
    parts = text.split(":")
    if len(parts) != 2:
        raise ParseError(f"--region {text!r} must have form a1,..:b1,..")
    try:
        a = [float(t) for t in parts[0].split(",")]
        b = [float(t) for t in parts[1].split(",")]
    except ValueError:
        raise ParseError(f"bad region spec {text!r}") from None
    return Region(a=np.array(a), b=np.array(b))


def _eval_points(eval_spec: str, d: int) -> np.ndarray:
    if Path(eval_spec).exists():
        return io.read_points(eval_spec, d)
    return make_grid(parse_grid(eval_spec))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _predictions_csv(model, points) -> str:
    values = np.atleast_1d(eval_model(model, points))
    d = model.frame.d
    header = ",".join(f"x{i + 1}" for i in range(d)) + ",prediction"
    lines = [header]
    for p, v in zip(points, values):
        lines.append(",".join(format(c, ".17g") for c in p) + f",{format(v, '.17g')}")
    return "\n".join(lines) + "\n"


def _run_fit(args) -> int:
    table = io.read_csv(args.data)
    spec = parse_kernel(args.kernel, theta=args.theta, d=table.d)
    frame = PolyFrame(d=table.d, theta=args.theta)
    if args.command == "interpolate":
        model = fit_interpolant(spec, frame, table.X, table.y)
    elif args.command == "smooth-exact":
        model = fit_exact(spec, frame, table.X, table.y, args.rho)
    else:
        Xp = make_grid(parse_grid(args.grid), theta=args.theta)
        model = fit_approx(spec, frame, table.X, table.y, Xp, args.rho)
    if not args.quiet:
        vnorm = float(np.linalg.norm(model.v))
        print(f"fitted {model.kind}: N={len(table.X)}, |v|={vnorm:.6g}",
              file=sys.stderr)
    if args.command == "smooth-exact" and args.diagnostics:
        diag = diagnostics(model, table.X, table.y)
        print(
            f"J_e={diag.J_e:.10g} seminorm_sq={diag.seminorm_sq:.10g} "
            f"residual_ms={diag.residual_ms:.10g}\n"
            f"gap_energy={diag.gap_energy:.3e} gap_seminorm={diag.gap_seminorm:.3e} "
            f"gap_functional={diag.gap_functional:.3e} "
            f"gap_constraint={diag.gap_constraint:.3e} ok={diag.ok}",
            file=sys.stderr,
        )
    if args.command == "smooth-approx" and args.compare_exact:
        exact = fit_exact(spec, frame, table.X, table.y, args.rho)
        record = compare(exact, model, table.X, table.y, args.rho)
        print(
            f"lhs={record.lhs:.10g} rhs={record.rhs:.10g} gap={record.gap:.3e} "
            f"Je_exact={record.J_e_exact:.10g} Je_approx={record.J_e_approx:.10g}",
            file=sys.stderr,
        )
    if args.save:
        io.save_model(model, args.save)
    if args.eval_spec:
        points = _eval_points(args.eval_spec, table.d)
        _emit(_predictions_csv(model, points), args.out)
    return EXIT_OK


def _run_eval(args) -> int:
    model = io.load_model(args.model)
    points = _eval_points(args.eval_spec, model.frame.d)
    _emit(_predictions_csv(model, points), args.out)
    return EXIT_OK


def _run_study(args) -> int:
    if args.study_command == "density":
        region = _parse_region(args.region)
        sizes = exponential_sizes(args.n_sizes, args.max_size, args.multiplier)
        fit = density_law(region, sizes, seed=args.seed)
        lines = ["N,h"]
        lines.extend(f"{n},{h:.10g}" for n, h in fit.rows)
        lines.append(f"# h1={fit.h1:.6g} a_exp={fit.a_exp:.6g} r2={fit.r2:.6g}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    if args.study_command == "convergence":
        region = _parse_region(args.region)
        spec = parse_kernel(args.kernel, theta=args.theta, d=region.d)
        frame = PolyFrame(d=region.d, theta=args.theta)
        sizes = tuple(int(t) for t in args.sizes.split(","))
        coupling = None
        if args.couple:
            coupling = RhoCoupling(
                eta_G=predicted_orders(spec).eta_G, a_exp=args.couple_a
            )
        grid_counts = None
        if args.grid:
            grid_counts = parse_grid(args.grid).counts
        config = SweepConfig(
            sizes=sizes, seed=args.seed, rho=args.rho, coupling=coupling,
            grid_counts=grid_counts,
        )
        report = convergence_sweep(
            spec, frame, region, DATA_FUNCTIONS[args.data_fn], args.mode, config
        )
        text = report.to_csv()
        if report.slope is not None:
            text += (
                f"# slope={report.slope:.6g} "
                f"predicted_eta_G={report.prediction.eta_G:.6g}\n"
            )
        elif report.slope_flag:
            text += f"# {report.slope_flag}\n"
        _emit(text, args.out)
        return EXIT_OK
    # rho-search
    table = io.read_csv(args.data)
    spec = parse_kernel(args.kernel, theta=args.theta, d=table.d)
    frame = PolyFrame(d=table.d, theta=args.theta)
    Xp = make_grid(parse_grid(args.grid), theta=args.theta)
    from .assembly import approx_parts
    from .interpolant import FittedModel

    parts = approx_parts(spec, frame, table.X, table.y, Xp)

    def fitter(rho: float) -> FittedModel:
        from .assembly import solve_block

        sys_ = parts.system(rho)
        alpha, beta, _ = sys_.split(solve_block(sys_))
        return FittedModel(
            spec=spec, frame=frame, centers=Xp, v=alpha, beta=beta,
            kind="approx_smoother", rho=rho,
        )

    if args.error_grid:
        if not args.data_fn:
            raise InputError("--error-grid requires --data-fn")
        err_grid = make_grid(parse_grid(args.error_grid))
        error_fn = grid_error_fn(fitter, DATA_FUNCTIONS[args.data_fn], err_grid)
    else:
        error_fn = residual_error_fn(fitter, table.X, table.y)
    best, trace = rho_search(error_fn, args.rho0, factor=args.factor)
    lines = ["rho,error"]
    lines.extend(f"{r:.10g},{e:.10g}" for r, e in trace)
    lines.append(f"# best_rho={best:.10g}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return _run_eval(args)
        if args.command == "study":
            return _run_study(args)
        return _run_fit(args)
    except (ParseError, InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolveError,) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BfsmoothError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
