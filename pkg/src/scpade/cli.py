"""Command-line entry point: ``scpade list | run | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from mpmath import mp

from . import acceptance, corpus, scheme
from .pade import InsufficientCoefficients
from .series import DEFAULT_DIGITS, digits_for_order

PRECISION_ENV = "SCPADE_DIGITS"
FIELDS = ("problem", "scheme", "n", "amplitude", "valid", "percent_error")
OUTPUT_DIGITS = 10  # six compared digits plus four guard digits
MIN_PRECISION = 30


class UsageError(ValueError):
    pass


def _precision(value) -> int:
    digits = int(value)
    if digits < MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION} digits")
    return digits


def _number(v, digits):
    return mp.nstr(v, digits, strip_zeros=False)


def sequence_records(seq, digits: int) -> list[dict]:
    rows = []
    for e in seq:
        rows.append({
            "problem": seq.problem_id,
            "scheme": seq.scheme_tag,
            "n": e.n,
            "amplitude": _number(e.amplitude, digits) if e.valid else "invalid",
            "valid": "true" if e.valid else "false",
            "percent_error": "" if e.percent_error is None else _number(e.percent_error, digits),
        })
    return rows


def run_problem(p, schemes, max_order: int, precision: int) -> list[dict]:
    records = []
    digits = min(OUTPUT_DIGITS, precision)
    for tag in schemes:
        if tag == "standard":
            if max_order < 1:
                continue
            extra = max(int(corpus.working_exponent_exact(p)), 0)
            work = max(precision, digits_for_order(2 * max_order + extra))
            seq = scheme.standard_amplitudes(p, max_order, digits=work)
        else:
            work = max(precision, digits_for_order(2 * max_order))
            seq = scheme.corrected_amplitudes(p, None, max_order, digits=work)
        records.extend(sequence_records(seq, digits))
    return records


def encode(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, code: int = 2) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def cmd_list(args) -> int:
    rows = []
    for pid, p in sorted(corpus.registry().items()):
        exact = p.exact_amplitude()
        rows.append(
            f"{pid:26s} alpha={p.alpha!s:3s} s={p.s!s:5s} control={p.control.kind:12s} "
            f"max_order={p.max_order:<5d} "
            f"{p.exact_kind}={'' if exact is None else mp.nstr(exact, 8)}"
        )
    sys.stdout.write("\n".join(rows) + "\n")
    return 0


def cmd_run(args) -> int:
    try:
        extra = {}
        for path in args.problem_file or []:
            for p in corpus.load_problem_file(path):
                extra[p.id] = p
        ids = list(args.problems) + list(args.problem or [])
        if not ids:
            ids = list(extra)
        if not ids:
            raise UsageError("no problem given")
        problems = [extra.get(pid) or corpus.get_problem(pid) for pid in ids]
    except corpus.UnknownProblem as exc:
        return _error("unknown_problem", str(exc.args[0]))
    except (UsageError, OSError, ValueError, KeyError) as exc:
        return _error("bad_input", str(exc))
    schemes = ("standard", "corrected") if args.scheme == "both" else (args.scheme,)
    records = []
    try:
        for p in problems:
            records.extend(run_problem(p, schemes, args.max_order, args.precision))
    except (corpus.OrderOverflow, InsufficientCoefficients) as exc:
        return _error("insufficient_coefficients", str(exc))
    _emit(encode(records, args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    ov = acceptance.Overrides()
    for item in args.corrupt or []:
        try:
            pid, index, value = item.split(":", 2)
            ov.corrupt(pid, int(index), value)
        except (ValueError, KeyError) as exc:
            return _error("bad_input", f"--corrupt {item}: {exc}")
    try:
        results = acceptance.run_acceptance(
            args.only, ov, report=lambda r: print(r.line(), flush=True))
    except KeyError as exc:
        return _error("bad_input", str(exc.args[0]))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    default_digits = int(os.environ.get(PRECISION_ENV, DEFAULT_DIGITS))
    parser = argparse.ArgumentParser(prog="scpade", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list benchmark problems").set_defaults(func=cmd_list)

    run = sub.add_parser("run", help="amplitude sequences for one or more problems")
    run.add_argument("problems", nargs="*", metavar="PROBLEM")
    run.add_argument("--problem", action="append", help="problem id (repeatable)")
    run.add_argument("--problem-file", action="append", help="JSON problem description")
    run.add_argument("--scheme", choices=("standard", "corrected", "both"), default="both")
    run.add_argument("--max-order", type=int, default=8)
    run.add_argument("--precision", type=_precision, default=default_digits,
                     help=f"working digits (default from {PRECISION_ENV} or {DEFAULT_DIGITS})")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", help="output path (default stdout)")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="run the golden-value checks")
    verify.add_argument("--only", action="append",
                        help="criterion number, group or problem id (repeatable)")
    verify.add_argument("--corrupt", action="append", metavar="ID:INDEX:VALUE",
                        help="replace one input coefficient before checking")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_order", 0) < 0:
        parser.error("--max-order must be nonnegative")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
