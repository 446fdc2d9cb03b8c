"""Command line entry point: ``gwepi {check,sweep,oracle,fq}``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from gwepi import harness
from gwepi.measures import RangeError
from gwepi.properties import fq_shape_reports, fq_square_reports, dyadic_power_grid
from gwepi.states import StateError, read_gw_state

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _floats(text: str) -> tuple[float, ...]:
    try:
        return harness.parse_floats(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser, config=True) -> None:
    if config:
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
    p.add_argument("--q-grid", type=_floats, help="comma separated q values")
    p.add_argument("--beta-grid", type=_floats, help="comma separated beta values")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--exploratory", action="store_true", default=None,
                   help="allow q in (2, 3); such rows are reported but never fail")
    p.add_argument("--tol", type=float, help="closed-form tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gwepi", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="all checks on one GW state file")
    p.add_argument("state", help="GW state file (first line 'n d', then one row of 're im' pairs per party)")
    _common(p, config=False)
    p.add_argument("--checks", help="comma separated subset of " + ",".join(harness.CHECKS))
    p.add_argument("--max-blocks", type=int, default=5)
    p.add_argument("--sides", help="also write triangle side lengths to this CSV")

    p = sub.add_parser("sweep", help="checks over random GW ensembles")
    _common(p)
    p.add_argument("--checks", help="comma separated subset of " + ",".join(harness.CHECKS))

    p = sub.add_parser("oracle", help="certify closed forms against the convex-roof search")
    _common(p)
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-concurrence", action="store_true", help="skip the concurrence roofs")

    p = sub.add_parser("fq", help="finite-difference grids for f_q and the scalar weighting bound")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--tol", type=float, default=1e-10, help="finite-difference slack")
    return parser


def _checks(text):
    return None if text is None else tuple(x for x in text.replace(",", " ").split())


def _config(args, **extra) -> harness.SweepConfig:
    return harness.load_config(
        getattr(args, "config", None),
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", None),
        q_grid=args.q_grid,
        beta_grid=args.beta_grid,
        out=args.out,
        exploratory=args.exploratory,
        tol=args.tol,
        **extra,
    )


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_check(args) -> int:
    g = read_gw_state(args.state)
    cfg = _config(args, checks=_checks(args.checks), max_blocks=args.max_blocks, n_range=(g.n, g.n))
    out = _open_out(cfg.out)
    try:
        summary = harness.run_sweep(cfg, states=[(0, g)], stream=out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.sides:
        with open(args.sides, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(harness.TRIANGLE_HEADER)
            writer.writerows(harness.triangle_side_rows(g, cfg.q_grid, exploratory=cfg.exploratory))
    print(summary.format(), file=sys.stderr if cfg.out is None else sys.stdout)
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    cfg = _config(args, checks=_checks(args.checks))
    out = _open_out(cfg.out)
    try:
        summary = harness.run_sweep(cfg, stream=out)
    finally:
        if out is not sys.stdout:
            out.close()
    print(summary.format(), file=sys.stderr if cfg.out is None else sys.stdout)
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def cmd_oracle(args) -> int:
    file_values = harness.parse_config(Path(args.config).read_text()) if args.config else {}
    if args.q_grid is None and "q_grid" not in file_values:
        args.q_grid = harness.ORACLE_Q_GRID
    cfg = _config(args, restarts=args.restarts)
    measures = [] if args.no_concurrence else [("concurrence", None)]
    measures += [("tsallis", float(q)) for q in cfg.q_grid]
    report = harness.run_oracle_certification(cfg, measures=measures)
    out = _open_out(cfg.out)
    try:
        report.write_csv(out)
    finally:
        if out is not sys.stdout:
            out.close()
    print(report.format(), file=sys.stderr if cfg.out is None else sys.stdout)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_fq(args) -> int:
    reports = fq_shape_reports(slack=args.tol) + fq_square_reports(slack=args.tol) + dyadic_power_grid()
    out = _open_out(args.out)
    try:
        harness.write_reports(reports, out)
    finally:
        if out is not sys.stdout:
            out.close()
    failed = [r for r in reports if not r.satisfied]
    names = sorted({r.check for r in reports})
    lines = [f"{name:<18}{sum(r.check == name for r in reports):>6} rows"
             f"{sum(r.check == name for r in failed):>6} failed" for name in names]
    print("\n".join(lines), file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK if not failed else EXIT_VIOLATION


COMMANDS = {"check": cmd_check, "sweep": cmd_sweep, "oracle": cmd_oracle, "fq": cmd_fq}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (harness.ConfigError, RangeError, StateError, OSError) as exc:
        print(f"gwepi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
