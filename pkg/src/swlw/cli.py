"""Command-line interface.

Verbs::

    swlw run <scenario.ini>
    swlw sweep <scenario.ini> --axis eps --values 8e-3,4e-3,2e-3,1e-3
    swlw verify <suite>
    swlw plot <table.csv> -o <plot.svg> [--logx --logy]

Output directory comes from --outdir or $SWLW_OUTDIR (default ./swlw_out).
Exit codes: 0 all diagnostics pass, 1 diagnostic failure, 2 configuration
error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigurationError
from .output import read_csv, write_svg_lines
from .runner import run_scenario, sweep_scenario, verify_suite
from .scenario import load_scenario

SUITES = ("algebra", "wave_property", "max_principle", "entropy",
          "physical_region", "charge", "cross_solver")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swlw",
        description="relativistic short wave-long wave interaction laboratory")
    parser.add_argument("--outdir", default=None,
                        help="output directory (default $SWLW_OUTDIR or ./swlw_out)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario file")
    p_run.add_argument("scenario")

    p_sweep = sub.add_parser("sweep", help="convergence/stability sweep")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--axis", required=True,
                         choices=("eps", "dx", "data_mollification"))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated sweep values")

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument("suite", choices=SUITES)

    p_plot = sub.add_parser("plot", help="render a CSV table as an SVG plot")
    p_plot.add_argument("csv")
    p_plot.add_argument("-o", "--output", required=True)
    p_plot.add_argument("--x", default=None, help="x column (default: first)")
    p_plot.add_argument("--logx", action="store_true")
    p_plot.add_argument("--logy", action="store_true")
    return parser


def _emit(report) -> int:
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    outdir = args.outdir or os.environ.get("SWLW_OUTDIR", "swlw_out")
    try:
        if args.command == "run":
            return _emit(run_scenario(load_scenario(args.scenario), outdir))
        if args.command == "sweep":
            values = [float(tok) for tok in args.values.split(",") if tok]
            scenario = load_scenario(args.scenario)
            return _emit(sweep_scenario(scenario, args.axis, values, outdir))
        if args.command == "verify":
            return _emit(verify_suite(args.suite, outdir))
        if args.command == "plot":
            header, data = read_csv(args.csv)
            x_name = args.x or header[0]
            if x_name not in header:
                raise ConfigurationError(f"no column {x_name!r} in {args.csv}")
            xi = header.index(x_name)
            series = [(data[:, xi], data[:, j], header[j])
                      for j in range(len(header)) if j != xi]
            write_svg_lines(args.output, series, title=os.path.basename(args.csv),
                            xlabel=x_name, logx=args.logx, logy=args.logy)
            print(f"wrote {args.output}")
            return 0
        raise ConfigurationError(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
