"""Batch command-line front end.

Subcommands: ``check`` runs the seeded invariant suite; ``solve``,
``galerkin``, ``riesz`` and ``project`` read a problem as JSON (from
``--input`` or stdin) and write a report as JSON (to ``--output`` or
stdout); ``poisson`` writes a convergence table as CSV and, when writing to
a file, a log-log figure next to it.

Exit codes: 0 success, 1 property failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import checks, fem1d, serialize
from .errors import CoerciveError
from .forms import (
    LinearForm,
    dual_norm,
    riesz,
    riesz_constructive,
    riesz_isometry_gap,
)
from .projection import decompose, make_subspace
from .solver import galerkin_solve, solve

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coercive",
        description="Solve coercive variational problems and verify their estimates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the randomized invariant suite")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument(
        "--scale", type=float, default=1.0, help="multiplier on per-check trial counts"
    )

    for name, help_text in (
        ("solve", "solve a variational problem from JSON"),
        ("galerkin", "solve on a subspace and report orthogonality/quasi-optimality"),
        ("riesz", "compute the representative of a linear form"),
        ("project", "orthogonal projection onto a subspace"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", type=Path, default=None, help="JSON file (default stdin)")
        p.add_argument("--output", type=Path, default=None, help="JSON file (default stdout)")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--seed", type=int, default=0)

    p_poisson = sub.add_parser("poisson", help="1D convergence study as CSV (+ figure)")
    p_poisson.add_argument("--case", default="poisson-sine")
    p_poisson.add_argument(
        "--levels", default="8,16,32,64", help="comma-separated cell counts"
    )
    p_poisson.add_argument("--beta", type=float, default=0.0)
    p_poisson.add_argument("--c", type=float, default=0.0)
    p_poisson.add_argument("--tol", type=float, default=1e-10)
    p_poisson.add_argument("--output", type=Path, default=None, help="CSV file (default stdout)")
    p_poisson.add_argument(
        "--plot", type=Path, default=None, help="figure path (default: next to the CSV)"
    )
    p_poisson.add_argument(
        "--no-plot", action="store_true", help="suppress the figure even for file output"
    )
    return parser


def _read_input(args) -> dict:
    if args.input is not None:
        text = args.input.read_text()
    else:
        text = sys.stdin.read()
    return serialize.load_input(text)


def _write_output(args, payload: dict) -> None:
    text = serialize.dumps(payload)
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_check(args) -> int:
    results = checks.run_all(seed=args.seed, scale=args.scale)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  trials={r.trials} failures={r.failures}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed")
    return 0 if n_pass == len(results) else 1


def _cmd_solve(args) -> int:
    problem = serialize.problem_from_dict(_read_input(args))
    report = solve(problem, tol=args.tol)
    _write_output(args, report.to_dict())
    return 0


def _cmd_galerkin(args) -> int:
    data = _read_input(args)
    problem = serialize.problem_from_dict(data)
    if "basis" not in data:
        raise CoerciveError("galerkin input needs a 'basis' field (dim x m, row-major)")
    sub = make_subspace(problem.space, np.asarray(data["basis"], dtype=float))
    report = galerkin_solve(
        problem,
        sub,
        cea_candidates=int(data.get("cea_candidates", 20)),
        tol=args.tol,
        rng_seed=args.seed,
    )
    _write_output(args, report.to_dict())
    return 0


def _cmd_riesz(args) -> int:
    data = _read_input(args)
    space = serialize.space_from_dict(data)
    if "f" not in data:
        raise CoerciveError("riesz input needs an 'f' field")
    form = LinearForm(np.asarray(data["f"], dtype=float))
    u = riesz(space, form)
    _write_output(
        args,
        {
            "riesz": u.tolist(),
            "constructive": riesz_constructive(space, form).tolist(),
            "dual_norm": dual_norm(space, form),
            "isometry_gap": riesz_isometry_gap(space, form),
        },
    )
    return 0


def _cmd_project(args) -> int:
    data = _read_input(args)
    space = serialize.space_from_dict(data)
    for key in ("basis", "u"):
        if key not in data:
            raise CoerciveError(f"project input needs a {key!r} field")
    sub = make_subspace(space, np.asarray(data["basis"], dtype=float))
    u = space.coeffs(np.asarray(data["u"], dtype=float))
    v, w = decompose(sub, u)
    _write_output(
        args,
        {
            "projection": v.tolist(),
            "complement": w.tolist(),
            "distance": space.norm(w),
        },
    )
    return 0


def _cmd_poisson(args) -> int:
    levels = [int(part) for part in str(args.levels).split(",") if part.strip()]
    rows = fem1d.convergence_study(
        args.case, levels, beta=args.beta, c=args.c, tol=args.tol
    )
    csv_text = fem1d.rows_to_csv(rows)
    if args.output is not None:
        args.output.write_text(csv_text)
    else:
        sys.stdout.write(csv_text)

    plot_path = args.plot
    if plot_path is None and args.output is not None and not args.no_plot:
        plot_path = args.output.with_suffix(".png")
    if plot_path is not None and not args.no_plot:
        from .plotting import convergence_figure

        convergence_figure(rows, plot_path, title=args.case)
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "solve": _cmd_solve,
    "galerkin": _cmd_galerkin,
    "riesz": _cmd_riesz,
    "project": _cmd_project,
    "poisson": _cmd_poisson,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CoerciveError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
