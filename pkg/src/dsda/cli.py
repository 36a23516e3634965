"""Command-line driver.

Three subcommands:

* ``solve``    -- load matrices, run the solve loop, emit a CSV or JSON
  report.  The exit code encodes the terminal status (0 Converged,
  2 MaxIter, 3 BudgetExceeded, 4 SingularEncountered); usage, config
  and parse errors exit with 1.
* ``selftest`` -- run the built-in scalar instances with closed-form
  answers through both the classical and decoupled methods.
* ``gen``      -- write a seeded random problem (matrices plus a config
  file) for benchmarking.

``RICCATI_COLUMN_BUDGET`` in the environment overrides the default
column budget when neither a flag nor the config file sets one.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .config import load_config
from .decoupled import DEFAULT_COLUMN_BUDGET, bsep_eigen_extract
from .driver import ConvergenceReport, SolveConfig, family_of, solve_driver
from .errors import SolverError
from .mmio import load_matrix_market, save_matrix_market
from .problems import (
    FAMILY_MATRIX_KEYS,
    assemble_problem,
    gen_random_bsep,
    gen_random_care,
    gen_random_dare,
    gen_random_mare,
    gen_scalar_suite,
)

STATUS_EXIT_CODES = {
    "Converged": 0,
    "MaxIter": 2,
    "BudgetExceeded": 3,
    "SingularEncountered": 4,
}

_MATRIX_FLAGS = ("A", "B", "C", "D", "B_l", "B_r", "C_l", "C_r", "L_B")


class _CliParser(argparse.ArgumentParser):
    """argparse that reports usage errors instead of calling sys.exit(2)."""

    def error(self, message):
        raise SolverError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="dsda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    solve = sub.add_parser("solve", help="solve one problem from matrix files")
    solve.add_argument("--config", help="key=value config file")
    solve.add_argument("--family", choices=("care", "dare", "mare", "bsep"))
    solve.add_argument("--method", choices=("sda", "dsda", "adda"))
    for flag in _MATRIX_FLAGS:
        solve.add_argument(f"--{flag}", metavar="PATH", dest=f"mat_{flag}",
                           help=f"Matrix Market file for {flag}")
    solve.add_argument("--gamma", type=float)
    solve.add_argument("--alpha", type=float)
    solve.add_argument("--beta", type=float)
    solve.add_argument("--tol", type=float)
    solve.add_argument("--max-iter", type=int, dest="max_iter")
    solve.add_argument("--column-budget", type=int, dest="column_budget")
    solve.add_argument("--output", choices=("csv", "json"), default="csv")
    solve.add_argument("--out-path", help="report destination (default stdout)")

    selftest = sub.add_parser(
        "selftest", help="check the scalar closed-form suite on both methods")
    selftest.add_argument("--tol", type=float, default=1e-10,
                          help="match tolerance against the analytic values")

    gen = sub.add_parser("gen", help="generate a seeded random problem")
    gen.add_argument("--family", required=True,
                     choices=("care", "dare", "mare", "bsep"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-dir", required=True)
    gen.add_argument("--n", type=int, default=16)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--l", type=int, default=2)
    gen.add_argument("--m1", type=int, default=2)
    gen.add_argument("--n1", type=int, default=2)
    gen.add_argument("--p", type=int, default=2)
    return parser


def emit_report(report: ConvergenceReport, fmt: str, sink) -> None:
    """Write a report as CSV (4 significant digits) or JSON (full precision)."""
    if fmt == "csv":
        sink.write("k,residual,rank,basis_cols,elapsed_ms\n")
        for rec in report.iterations:
            sink.write(f"{rec.k},{rec.residual:.3e},{rec.rank},"
                       f"{rec.basis_cols},{rec.elapsed_ms:.3f}\n")
        return
    payload = {
        "status": report.status,
        "family": report.family,
        "method": report.method,
        "config": dataclasses.asdict(report.config) if report.config else None,
        "iterations": [dataclasses.asdict(rec) for rec in report.iterations],
    }
    json.dump(payload, sink, indent=2)
    sink.write("\n")


def _resolve_column_budget(flag_value, config_value) -> int:
    if flag_value is not None:
        return flag_value
    if config_value is not None:
        return config_value
    env = os.environ.get("RICCATI_COLUMN_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SolverError(
                f"RICCATI_COLUMN_BUDGET must be an integer, got '{env}'") from None
    return DEFAULT_COLUMN_BUDGET


def _cmd_solve(args) -> int:
    file_cfg = None
    paths: dict[str, str] = {}
    if args.config:
        file_cfg, paths = load_config(args.config)

    family = args.family or (file_cfg.family if file_cfg else None)
    if family is None:
        raise SolverError("solve needs --family (or a config file naming one)")
    for flag in _MATRIX_FLAGS:
        value = getattr(args, f"mat_{flag}")
        if value is not None:
            paths[flag] = value

    # Flags override config-file values, which override defaults.
    defaults = SolveConfig()
    base = file_cfg if file_cfg is not None else defaults
    gamma = args.gamma if args.gamma is not None else base.gamma
    alpha = args.alpha if args.alpha is not None else base.alpha
    beta = args.beta if args.beta is not None else base.beta
    if family == "care" and gamma is None:
        raise SolverError("--gamma is required for --family care")

    missing = [k for k in FAMILY_MATRIX_KEYS[family] if k not in paths]
    if missing:
        flags = ", ".join(f"--{k}" for k in missing)
        raise SolverError(f"family '{family}' needs matrix flags: {flags}")
    matrices = {key: load_matrix_market(paths[key])
                for key in FAMILY_MATRIX_KEYS[family]}
    problem = assemble_problem(family, matrices, gamma=gamma, alpha=alpha,
                               beta=beta)

    file_budget = (base.column_budget
                   if base.column_budget != defaults.column_budget else None)
    cfg = SolveConfig(
        tol=args.tol if args.tol is not None else base.tol,
        max_iter=args.max_iter if args.max_iter is not None else base.max_iter,
        column_budget=_resolve_column_budget(args.column_budget, file_budget),
        method=args.method or (base.method if file_cfg is not None else "dsda"),
        family=family,
        gamma=gamma, alpha=alpha, beta=beta,
    )
    report = solve_driver(problem, cfg)
    if args.out_path:
        with open(args.out_path, "w", encoding="utf-8") as sink:
            emit_report(report, args.output, sink)
    else:
        emit_report(report, args.output, sys.stdout)
    return STATUS_EXIT_CODES[report.status]


def _cmd_selftest(args) -> int:
    ok = True
    for problem, target in gen_scalar_suite():
        family = family_of(problem)
        for method in ("sda", "dsda"):
            report = solve_driver(problem, SolveConfig(method=method,
                                                       family=family))
            if report.final_solution is None:
                ok = False
                print(f"{family:4s} {method:4s} FAIL: no solution "
                      f"(status {report.status})")
                continue
            if family == "bsep":
                eigs = bsep_eigen_extract(report.final_solution, problem.a,
                                          problem.b_dense())
                got = float(eigs[0].real)
            else:
                got = float(report.final_solution[0, 0])
            err = abs(got - target)
            good = err <= args.tol
            ok = ok and good
            print(f"{family:4s} {method:4s} "
                  f"{'ok  ' if good else 'FAIL'} got={got:+.12f} "
                  f"target={target:+.12f} err={err:.2e} status={report.status}")
    return 0 if ok else 1


def _cmd_gen(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    lines = [f"family = {args.family}", "method = dsda"]
    if args.family == "care":
        p = gen_random_care(args.n, args.m, args.l, args.seed)
        matrices = {"A": p.a, "B": p.b, "C": p.c}
        lines.append(f"gamma = {p.gamma}")
    elif args.family == "dare":
        p = gen_random_dare(args.n, args.m, args.l, args.seed)
        matrices = {"A": p.a, "B": p.b, "C": p.c}
    elif args.family == "mare":
        p = gen_random_mare(args.m, args.n, args.m1, args.n1, args.seed)
        matrices = {"A": p.a, "D": p.d, "B_l": p.b_l, "B_r": p.b_r,
                    "C_l": p.c_l, "C_r": p.c_r}
    else:
        p = gen_random_bsep(args.n, args.p, args.seed)
        matrices = {"A": p.a, "L_B": p.l_b}
        lines.append(f"alpha = {p.alpha}")
    for key, mat in matrices.items():
        fname = f"{key}.mtx"
        save_matrix_market(os.path.join(args.out_dir, fname), mat,
                           comment=f"seeded {args.family} instance, "
                                   f"seed={args.seed}")
        lines.append(f"{key} = {fname}")
    cfg_path = os.path.join(args.out_dir, "problem.cfg")
    with open(cfg_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(cfg_path)
    return 0


def run_cli(argv) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "solve":
            return _cmd_solve(args)
        if args.subcommand == "selftest":
            return _cmd_selftest(args)
        return _cmd_gen(args)
    except SystemExit as exc:
        # argparse --help exits 0; keep run_cli returning codes instead.
        return int(exc.code or 0)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
