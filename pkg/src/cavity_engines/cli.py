"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error,
3 validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .parallel import WORKERS_ENV
from .recipes import RECIPES, UnknownRecipe, write_recipe
from .sweep import ConfigError, build_cycle, format_csv, format_json, load_config, run_sweep
from .validation import validate_closed_forms

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _cycle_params(args) -> dict:
    if args.t_cold >= args.t_hot:
        raise UsageError(
            f"--t-cold ({args.t_cold}) must be below --t-hot ({args.t_hot}): temperature ordering"
        )
    for flag, value in (("--t-hot", args.t_hot), ("--t-cold", args.t_cold)):
        if value <= 0:
            raise UsageError(f"{flag} must be positive, got {value}")

    if args.cycle == "stirling":
        pairs = (("--g-start", args.g_start), ("--g-end", args.g_end))
    else:
        pairs = (("--g-hot", args.g_hot), ("--g-cold", args.g_cold))
    for flag, value in pairs:
        if value is None:
            raise UsageError(f"{flag} is required for the {args.cycle} cycle")
        if value < 0:
            raise UsageError(f"{flag} must be non-negative, got {value}")

    if args.n is None:
        raise UsageError("--n is required")
    if args.model == "four-level":
        if args.n < 1:
            raise UsageError(f"--n must be >= 1 for the four-level model, got {args.n}")
        for flag, value in (("--k", args.k), ("--J", args.J)):
            if value is None:
                raise UsageError(f"{flag} is required for the four-level model")
    else:
        if args.n < 0:
            raise UsageError(f"--n must be >= 0, got {args.n}")
        for flag, value in (("--omega-a", args.omega_a), ("--omega-c", args.omega_c)):
            if value is None:
                raise UsageError(f"{flag} is required for the jc model")
            if value <= 0:
                raise UsageError(f"{flag} must be positive, got {value}")

    swept, fixed = pairs[0][1], pairs[1][1]
    params = dict(t_hot=args.t_hot, t_cold=args.t_cold, n=args.n, g=swept, g_fixed=fixed)
    if args.model == "jc":
        params.update(omega_a=args.omega_a, omega_c=args.omega_c)
    else:
        params.update(k=args.k, J=args.J)
    return params


def cmd_cycle(args) -> int:
    params = _cycle_params(args)
    spec, runner = build_cycle(args.model, args.cycle, params)
    result = runner(spec)
    doc = {"model": args.model, "parameters": params, **result.to_dict()}
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        config = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    rows = run_sweep(config, workers=args.workers)
    text = format_csv(config, rows) if config.format == "csv" else format_json(config, rows)
    out = args.output or config.output
    if out in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _overrides(pairs) -> dict:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def cmd_figures(args) -> int:
    names = sorted(RECIPES) if args.which == "all" else [args.which]
    overrides = _overrides(args.set)
    for name in names:
        try:
            path = write_recipe(name, args.out, overrides)
        except UnknownRecipe:
            raise UsageError(
                f"unknown recipe '{name}'; valid recipes: {', '.join(sorted(RECIPES))}"
            ) from None
        except OSError as exc:
            print(f"error: cannot write figure data: {exc}", file=sys.stderr)
            return EXIT_IO
        print(path)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.grid < 1:
        raise UsageError(f"--grid must be >= 1, got {args.grid}")
    report = validate_closed_forms(args.grid, args.seed)
    text = report.to_json()
    if args.report in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.report, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.report}: {exc}", file=sys.stderr)
            return EXIT_IO
    for c in report.checks:
        status = "ok" if c.passed else "FAIL"
        print(f"{status:4s} {c.name} (max err {c.max_abs_error:.3e}, tol {c.tolerance:.0e})",
              file=sys.stderr)
    return EXIT_OK if report.overall else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-engines",
        description="Quantum Otto and Stirling engines with cavity-QED working substances.",
        epilog=f"Set {WORKERS_ENV} to cap the number of worker threads used by sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", help="run a single cycle and print the result as JSON")
    p.add_argument("--model", choices=("jc", "four-level"), required=True)
    p.add_argument("--cycle", choices=("stirling", "otto"), required=True)
    p.add_argument("--t-hot", type=float, required=True)
    p.add_argument("--t-cold", type=float, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--omega-a", type=float)
    p.add_argument("--omega-c", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--J", type=float)
    p.add_argument("--g-start", type=float, help="Stirling coupling at states A and D")
    p.add_argument("--g-end", type=float, help="Stirling coupling at states B and C")
    p.add_argument("--g-hot", type=float, help="Otto coupling during hot-bath contact")
    p.add_argument("--g-cold", type=float, help="Otto coupling during cold-bath contact")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("sweep", help="sweep one parameter from a config file")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="output path (overrides the config; '-' for stdout)")
    p.add_argument("--workers", type=int, help=f"worker threads (default: {WORKERS_ENV} or CPU count)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="write plot-ready CSV for a named recipe")
    p.add_argument("--which", required=True, help=f"one of: all, {', '.join(sorted(RECIPES))}")
    p.add_argument("--out", default="figures", help="output directory")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a recipe parameter")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("validate", help="cross-check closed forms against the oracle")
    p.add_argument("--grid", type=int, default=1000, help="number of random parameter draws")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--report", help="JSON report path (default: stdout)")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
