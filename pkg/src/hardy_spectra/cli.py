"""Command line: ``hardy-spectra {spectrum,sweep,plot,rkt,verify}``.

Exit codes: 0 on success, 2 when the result carries warnings or an
inconsistency, 1 on invalid input or failure.
"""
import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import ConvergenceError, InconsistencyError
from .figure import SchemaError, format_number, parse_sweep_csv, render_svg, sweep_to_csv
from .rkt import rkt_decision
from .spectrum import find_eigenvalues, sweep
from .verify import LEVELS, run_verify

__all__ = ["RunConfig", "build_parser", "main"]

EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2
ORACLES = ("dense", "tridiagonal", "sturm", "none")


class CliError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    alpha: float = None
    alpha_min: float = None
    alpha_max: float = None
    step: float = None
    tol: float = 1e-10
    trunc_n: int = 4000
    out: str = None
    input: str = None
    format: str = "json"
    level: str = "quick"
    oracle: str = "dense"

    def __post_init__(self):
        def positive(name):
            value = getattr(self, name)
            if value is None or not (math.isfinite(value) and value > 0):
                raise CliError(f"--{name.replace('_', '-')} must be a positive number")

        if self.subcommand in ("spectrum", "rkt", "verify"):
            positive("alpha")
        if self.subcommand == "sweep":
            for name in ("alpha_min", "alpha_max", "step"):
                positive(name)
            if not self.alpha_min < self.alpha_max:
                raise CliError("--min must be below --max")
        positive("tol")
        if self.trunc_n < 2:
            raise CliError("--trunc-n must be at least 2")


def _dump_json(obj):
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _clean(obj):
    # plain floats only, nan and inf become null
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    value = float(obj)
    return value if math.isfinite(value) else None


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _oracle(name):
    return None if name == "none" else name


def cmd_spectrum(cfg):
    report = find_eigenvalues(cfg.alpha, cfg.tol, trunc_n=cfg.trunc_n, oracle=_oracle(cfg.oracle))
    data = report.to_dict()
    if cfg.format == "json":
        text = _dump_json(data)
    elif cfg.format == "csv":
        header = ["alpha", "band_top", "count"] + [f"lambda_{j + 1}" for j in range(report.count)]
        values = [format_number(cfg.alpha), format_number(2.0 / cfg.alpha), str(report.count)]
        values += [format_number(v) for v in report.lambda_K]
        text = ",".join(header) + "\n" + ",".join(values) + "\n"
        if report.warnings:
            text += "# warnings: " + " | ".join(report.warnings) + "\n"
    else:
        raise CliError("spectrum supports --format json or csv")
    _emit(text, cfg.out)
    return EXIT_WARN if report.warnings else EXIT_OK


def cmd_sweep(cfg):
    if cfg.format != "csv":
        raise CliError("sweep writes CSV only")
    rows = sweep(cfg.alpha_min, cfg.alpha_max, cfg.step, cfg.tol, cfg.trunc_n, _oracle(cfg.oracle))
    _emit(sweep_to_csv(rows), cfg.out)
    return EXIT_WARN if any(r.warnings for r in rows) else EXIT_OK


def cmd_plot(cfg):
    if cfg.input is None:
        raise CliError("plot needs an input CSV")
    try:
        text = Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(str(exc)) from None
    table = parse_sweep_csv(text)
    _emit(render_svg(table), cfg.out)
    return EXIT_OK


def cmd_rkt(cfg):
    try:
        report = rkt_decision(cfg.alpha, cfg.tol)
        code = EXIT_WARN if report.warnings else EXIT_OK
    except InconsistencyError as exc:
        report = exc.report
        sys.stderr.write(f"inconsistent verdict: {exc}\n")
        code = EXIT_WARN
    _emit(_dump_json(report.to_dict()), cfg.out)
    return code


def cmd_verify(cfg):
    summary = run_verify(cfg.alpha, cfg.level)
    _emit(_dump_json(summary), cfg.out)
    if not summary["passed"]:
        failed = [c["name"] for c in summary["checks"] if not c["passed"]]
        sys.stderr.write("failed invariants: " + ", ".join(failed) + "\n")
        return EXIT_ERROR
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "plot": cmd_plot,
    "rkt": cmd_rkt,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser():
    parser = _Parser(prog="hardy-spectra", description="Spectra of the multiplicative Hilbert-type kernel K_alpha.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, fmt, fmts, oracle="dense"):
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--trunc-n", type=int, default=4000)
        p.add_argument("--out")
        p.add_argument("--format", choices=fmts, default=fmt)
        p.add_argument("--oracle", choices=ORACLES, default=oracle,
                       help="cross-check against the truncated kernel")

    p = sub.add_parser("spectrum", help="eigenvalues above the band for one alpha")
    p.add_argument("--alpha", type=float, required=True)
    common(p, "json", ("json", "csv"))

    p = sub.add_parser("sweep", help="rescaled spectra over an alpha grid (CSV)")
    p.add_argument("--min", dest="alpha_min", type=float, required=True)
    p.add_argument("--max", dest="alpha_max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    common(p, "csv", ("csv",), oracle="tridiagonal")

    p = sub.add_parser("plot", help="SVG figure from a sweep CSV")
    p.add_argument("input", help="sweep CSV")
    p.add_argument("--out")
    p.add_argument("--format", choices=("svg",), default="svg")

    p = sub.add_parser("rkt", help="reproducing kernel thesis verdict")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("verify", help="invariant suites")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--level", choices=LEVELS, default="quick")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json",), default="json")
    return parser


def parse_config(argv):
    args = vars(build_parser().parse_args(argv))
    return RunConfig(**{k: v for k, v in args.items() if v is not None})


def main(argv=None):
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.subcommand](cfg)
    except (CliError, SchemaError, ValueError, ConvergenceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
