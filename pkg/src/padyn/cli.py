"""Command-line entry point.

Exit codes: 0 success, 1 failed check or verification item, 2 precision
exhausted, 3 parse/config error, 4 hypothesis or guard violation,
5 truncation too short.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .config import JobConfig, load_config
from .errors import ConfigError, PadynError
from .jobs import run_analyze, run_conjugacy, run_newton, run_sweep
from .report import coefficients_csv, polygon_csv, polygon_svg, spectrum_csv
from .verify import run_suite


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--decimal", action="store_true", help="add approximate decimal radii (labeled approximate)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padyn", description="Exact p-adic linearization and periodic-point analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="multiplier invariants, radii and the closed-form spectrum")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("conjugacy", help="valuations of the conjugacy coefficients and their laws")
    p.add_argument("config")
    p.add_argument("--K", type=int, help="truncation (default: [job] K)")
    _common(p)

    p = sub.add_parser("newton", help="Newton polygons of the iterates and the periodic spectrum")
    p.add_argument("config")
    p.add_argument("--nmax", type=int, help="highest level (default: [job] nmax)")
    p.add_argument("--svg", help="draw the top-level polygon to this file")
    _common(p)

    p = sub.add_parser("run", help="run the command named in [job] command")
    p.add_argument("config")
    p.add_argument("--svg")
    _common(p)

    p = sub.add_parser("verify", help="run the reference verification suite")
    p.add_argument("suite", nargs="?", default="reference")
    p.add_argument("--only", type=int, nargs="*", help="item numbers to run")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _sibling(path: str, suffix: str) -> str:
    stem, _ = os.path.splitext(path)
    return f"{stem}{suffix}"


def _run_config(command: str, cfg: JobConfig, args) -> int:
    fmt = args.format
    if cfg.sweep:
        if fmt != "json":
            raise ConfigError("sweeps are reported as JSON only")
        doc = run_sweep(command, cfg, max(1, args.jobs), args.decimal)
        _emit(doc.to_json(), args.out)
        codes = [r["error"]["exit_code"] for r in doc.sweep if "error" in r]
        if codes:
            return codes[0]
        return 0 if doc.passed else 1

    if command == "analyze":
        doc = run_analyze(cfg, args.decimal)
        if fmt == "csv":
            rows = (doc.spectra or {}).get("formula", [])
            _emit(spectrum_csv((a, Fraction(b), c) for a, b, c in rows), args.out)
        else:
            _emit(doc.to_json(), args.out)
    elif command == "conjugacy":
        doc = run_conjugacy(cfg, getattr(args, "K", None), args.decimal)
        if fmt == "csv":
            _emit(coefficients_csv(doc.coefficients["nu_b"]), args.out)
        else:
            _emit(doc.to_json(), args.out)
    elif command == "newton":
        doc, levels = run_newton(cfg, getattr(args, "nmax", None), args.decimal)
        top = levels[-1].polygon
        if fmt == "csv":
            poly = polygon_csv([] if top is None else top.vertices)
            spec = spectrum_csv((a, Fraction(b), c) for a, b, c in doc.spectra["newton"])
            if args.out:
                _emit(poly, args.out)
                _emit(spec, _sibling(args.out, ".spectrum.csv"))
            else:
                _emit(poly + "\n" + spec, None)
        else:
            _emit(doc.to_json(), args.out)
        if getattr(args, "svg", None) and top is not None:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(polygon_svg(top, title=f"level {levels[-1].n}"))
    elif command == "verify":
        return _verify("reference", None)
    else:
        raise ConfigError(f"unknown command {command!r}")
    return 0 if doc.passed else 1


def _verify(suite: str, only) -> int:
    results = run_suite(suite, only)
    for r in results:
        print(r.line())
        if not r.passed:
            print(f"    observed: {r.observed}")
            print(f"    expected: {r.expected}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} items passed")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args.suite, args.only)
        cfg = load_config(args.config)
        command = args.command
        if command == "run":
            command = cfg.command
            if command is None:
                raise ConfigError("[job] command is required for 'run'")
            if not hasattr(args, "K"):
                args.K = None
            if not hasattr(args, "nmax"):
                args.nmax = None
        return _run_config(command, cfg, args)
    except PadynError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
