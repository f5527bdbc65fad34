"""Command-line front end.

Commands: moments, classify, limit-table, discrete-arcsine, verify.
Exit codes: 0 success, 2 configuration error, 3 no predicted limit,
4 computation failure.  Output is json (full precision, exact values as
numerator/denominator strings) or csv (17 significant digits), identical
numeric content either way.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, arcsine, fock, jacobi, rac, verify
from .arcsine import TruncationError
from .fock import RootScaled
from .jacobi import (
    CatalogError,
    ExactModeError,
    SequenceFileError,
    SequenceRangeError,
)
from .orthopoly import QuadratureError
from .seqexpr import ExprEvalError, ExprSyntaxError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_LIMIT = 3
EXIT_COMPUTE = 4

_CONFIG_ERRORS = (CatalogError, SequenceFileError, ExprSyntaxError)
_COMPUTE_ERRORS = (
    ExactModeError,
    SequenceRangeError,
    ExprEvalError,
    TruncationError,
    QuadratureError,
    arcsine.SeriesAccuracyError,
    OverflowError,
    ZeroDivisionError,
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Argument plumbing


def _add_source_args(parser):
    parser.add_argument("--catalog", help="catalog sequence name")
    parser.add_argument("--file", help="sequence definition file (TOML)")
    parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="sequence parameter, repeatable (values parsed exactly: 1/2, 0.3, 2)",
    )


def _add_output_args(parser):
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockarc",
        description="Moment engine for Jacobi-sequence state spaces: "
        "classification and limit-law verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="state-indexed raw and normalized moments")
    _add_source_args(p)
    _add_output_args(p)
    p.add_argument("--levels", required=True, help="comma-separated levels, e.g. 0,10")
    p.add_argument("--mmax", required=True, type=int, help="largest moment order")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")

    p = sub.add_parser("classify", help="asymptotic-commutativity classification")
    _add_source_args(p)
    _add_output_args(p)
    p.add_argument("--schedule", default=None, help="comma-separated probe indices")
    p.add_argument("--tol", type=float, default=rac.DEFAULT_TOL)

    p = sub.add_parser("limit-table", help="normalized moments vs predicted limit law")
    _add_source_args(p)
    _add_output_args(p)
    p.add_argument("--levels", required=True)
    p.add_argument("--mmax", required=True, type=int)
    p.add_argument("--tol", type=float, default=rac.DEFAULT_TOL)
    p.add_argument("--mode", choices=("exact", "float"), default="float")

    p = sub.add_parser("discrete-arcsine", help="lattice law weight table and moments")
    _add_output_args(p)
    p.add_argument("--c", required=True, help="nonzero drift constant")
    p.add_argument("--tol", type=float, default=1e-12, help="certified tail mass")
    p.add_argument("--moments", type=int, default=0, metavar="M", help="also emit moments up to order M")

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--json", action="store_true", help="shorthand for --format json")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ConfigError(f"--param expects NAME=VALUE, got {pair!r}")
        try:
            params[name] = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad value for parameter {name!r}: {exc}") from exc
    return params


def _build_sequence(args) -> jacobi.JacobiSequence:
    if bool(args.catalog) == bool(args.file):
        raise ConfigError("exactly one of --catalog or --file is required")
    if args.catalog:
        return jacobi.catalog_sequence(args.catalog, _parse_params(args.param))
    if args.param:
        raise ConfigError("--param applies to --catalog; put params in the file")
    return jacobi.load_sequence_file(args.file)


def _parse_levels(text: str) -> list:
    try:
        levels = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --levels: {exc}") from exc
    if not levels or any(k < 0 for k in levels):
        raise ConfigError("--levels must be nonnegative integers")
    return levels


# ---------------------------------------------------------------------------
# Value rendering


def _json_value(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, RootScaled):
        return {
            "coeff": str(value.coeff),
            "inv_sqrt_of": str(value.variance),
            "value": float(value),
        }
    return value


def _csv_value(value):
    if isinstance(value, (Fraction, RootScaled)):
        value = float(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return value


def _emit(payload: dict, rows, columns, args) -> None:
    if getattr(args, "json", False):
        args.format = "json"
    if args.format == "json":
        body = dict(payload)
        body["schema_version"] = "1"
        body["tool_version"] = __version__
        body["rows"] = [
            {col: _json_value(row[col]) for col in columns} for row in rows
        ]
        text = json.dumps(body, sort_keys=True, indent=2, default=_json_value) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_value(row[col]) for col in columns])
        text = buffer.getvalue()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands


def cmd_moments(args) -> int:
    seq = _build_sequence(args)
    levels = _parse_levels(args.levels)
    if args.mmax < 0:
        raise ConfigError("--mmax must be >= 0")
    rows = []
    for k in levels:
        for m in range(1, args.mmax + 1):
            rows.append(
                {
                    "k": k,
                    "m": m,
                    "raw": fock.moment(seq, k, m, args.mode),
                    "normalized": fock.normalized_moment(seq, k, m, args.mode),
                    "mode": args.mode,
                }
            )
    _emit(
        {"command": "moments", "sequence": seq.describe()},
        rows,
        ("k", "m", "raw", "normalized", "mode"),
        args,
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    seq = _build_sequence(args)
    schedule = rac.DEFAULT_SCHEDULE
    if args.schedule:
        schedule = tuple(_parse_levels(args.schedule))
    try:
        report = rac.classify(seq, schedule, args.tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = {
        "command": "classify",
        "sequence": seq.describe(),
        "classification": report.classification,
        "c": report.c,
        "predicted_limit": report.predicted_limit,
        "tol": report.tol,
        "r_limit": report.r_limit,
        "r_residual": report.r_residual,
        "d_limit": report.d_limit,
        "d_residual": report.d_residual,
    }
    rows = [
        {
            "classification": report.classification,
            "c": report.c if report.c is not None else "",
            "predicted_limit": report.predicted_limit,
            "r_limit": report.r_limit,
            "r_residual": report.r_residual,
            "d_limit": report.d_limit,
            "d_residual": report.d_residual,
            "probe_n": point.n,
            "probe_r": point.r,
            "probe_d": point.d,
        }
        for point in report.probes
    ]
    _emit(
        payload,
        rows,
        (
            "classification",
            "c",
            "predicted_limit",
            "r_limit",
            "r_residual",
            "d_limit",
            "d_residual",
            "probe_n",
            "probe_r",
            "probe_d",
        ),
        args,
    )
    return EXIT_OK


def cmd_limit_table(args) -> int:
    seq = _build_sequence(args)
    levels = _parse_levels(args.levels)
    if not (1 <= args.mmax <= 20):
        raise ConfigError("--mmax must be in 1..20")
    report = rac.classify(seq, tol=args.tol)
    try:
        table = rac.limit_table(seq, levels, args.mmax, report, args.mode)
    except rac.NoPredictedLimitError as exc:
        print(f"fockarc: no predicted limit: {exc}", file=sys.stderr)
        return EXIT_NO_LIMIT
    rows = [
        {
            "k": row.k,
            "m": row.m,
            "computed": row.computed,
            "predicted": row.predicted,
            "error": row.error,
        }
        for row in table.rows
    ]
    _emit(
        {
            "command": "limit-table",
            "sequence": seq.describe(),
            "classification": report.classification,
            "c": report.c,
            "predicted_limit": report.predicted_limit,
        },
        rows,
        ("k", "m", "computed", "predicted", "error"),
        args,
    )
    return EXIT_OK


def cmd_discrete_arcsine(args) -> int:
    try:
        c = Fraction(args.c)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad --c: {exc}") from exc
    if c == 0:
        raise ConfigError("--c must be nonzero")
    if args.tol <= 0:
        raise ConfigError("--tol must be positive")
    law = arcsine.discrete_arcsine(c, tol=args.tol)
    rows = [
        {
            "record": "weight",
            "index": n,
            "support": law.support_point(n),
            "value": law.weight(n),
        }
        for n in range(-law.n_trunc, law.n_trunc + 1)
    ]
    for m in range(0, args.moments + 1):
        rows.append(
            {
                "record": "moment",
                "index": m,
                "support": "",
                "value": arcsine.discrete_moment(law, m),
            }
        )
    _emit(
        {
            "command": "discrete-arcsine",
            "c": law.c,
            "n_trunc": law.n_trunc,
            "tail_mass_bound": law.tail_mass_bound,
            "total_mass": law.total_mass(),
        },
        rows,
        ("record", "index", "support", "value"),
        args,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_checks(inject_fault=args.inject_fault)
    failed = [r for r in results if not r.passed]
    fmt = "json" if args.json else args.format
    if fmt is None:
        lines = [
            f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
        ]
        lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    else:
        args.format = fmt
        rows = [
            {"check": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ]
        _emit(
            {"command": "verify", "passed": not failed, "checks_run": len(results)},
            rows,
            ("check", "passed", "detail"),
            args,
        )
    return 1 if failed else EXIT_OK


_COMMANDS = {
    "moments": cmd_moments,
    "classify": cmd_classify,
    "limit-table": cmd_limit_table,
    "discrete-arcsine": cmd_discrete_arcsine,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"fockarc: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _CONFIG_ERRORS as exc:
        print(f"fockarc: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _COMPUTE_ERRORS as exc:
        print(f"fockarc: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
