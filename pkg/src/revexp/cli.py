"""Command-line interface.

Exit codes: 0 when the command succeeds (and, for verdict-producing
commands, the answer is "equivalent"), 1 when the answer is "not
equivalent" or a self-test fails, 2 on any error.  ``REVEXP_STATE_CAP``
overrides the default state budget for system construction.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import selfcheck
from .axioms import (
    Theory,
    expansion_law_f,
    format_trace,
    normalize_f,
    normalize_fr,
    normalize_r,
    prove_eq,
)
from .bisim import Variant, check
from .encoding import HistoryOrder, default_order, encode
from .errors import RevexpError
from .generate import enumerate_processes
from .semantics import DEFAULT_STATE_CAP, build_brs_lts, build_lts, export
from .syntax import parse, parse_proof_term, render
from .terms import to_initial

_VARIANTS = {v.value: v for v in Variant}
_THEORIES = {t.value: t for t in Theory}


def _state_cap() -> int:
    value = os.environ.get("REVEXP_STATE_CAP")
    return int(value) if value else DEFAULT_STATE_CAP


def _parse_term(text: str, allow_illformed: bool):
    return parse(text, allow_illformed=allow_illformed)


def _order_from_spec(spec: str):
    if spec == "lex":
        return default_order()
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        with open(path, encoding="utf-8") as handle:
            proofs = tuple(
                parse_proof_term(line.strip())
                for line in handle
                if line.strip()
            )
        return HistoryOrder(proofs)
    raise ValueError(f"unknown order {spec!r}; use 'lex' or 'file:<path>'")


def _cmd_check(args) -> int:
    p1 = _parse_term(args.p1, args.allow_illformed)
    p2 = _parse_term(args.p2, args.allow_illformed)
    verdict = check(p1, p2, _VARIANTS[args.variant], _state_cap())
    if verdict.equivalent:
        print("equivalent")
        if args.witness:
            for block in verdict.witness:
                print("  { " + " , ".join(block) + " }")
        return 0
    ce = verdict.counterexample
    print("not equivalent")
    print(f"  {ce.left}  vs  {ce.right}")
    print(f"  direction: {ce.direction}; {ce.detail}")
    return 1


def _cmd_lts(args) -> int:
    p = _parse_term(args.process, args.allow_illformed)
    if args.brs:
        lts = build_brs_lts(encode(p, default_order(p)), _state_cap())
    else:
        lts = build_lts(to_initial(p), _state_cap())
    print(export(lts, args.format))
    return 0


def _cmd_encode(args) -> int:
    p = _parse_term(args.process, args.allow_illformed)
    order = _order_from_spec(args.order)
    print(render(encode(p, order), unicode=args.unicode))
    return 0


def _cmd_normalize(args) -> int:
    p = _parse_term(args.process, args.allow_illformed)
    theory = _THEORIES[args.theory]
    if theory is Theory.F:
        result = normalize_f(p)
    elif theory is Theory.R:
        result = normalize_r(encode(p, default_order(p)))
    else:
        result = normalize_fr(encode(p, default_order(p)))
    print(render(result, unicode=args.unicode))
    return 0


def _cmd_prove(args) -> int:
    p1 = _parse_term(args.p1, args.allow_illformed)
    p2 = _parse_term(args.p2, args.allow_illformed)
    trace = [] if args.trace else None
    equal = prove_eq(p1, p2, _THEORIES[args.theory], trace)
    print("equal" if equal else "not equal")
    if args.trace and trace:
        print(format_trace(trace))
    return 0 if equal else 1


def _cmd_expand(args) -> int:
    p1 = _parse_term(args.p1, args.allow_illformed)
    p2 = _parse_term(args.p2, args.allow_illformed)
    sync = tuple(s for s in args.sync.split(",") if s) if args.sync else ()
    expanded = expansion_law_f(normalize_f(p1), normalize_f(p2), sync)
    print(render(normalize_f(expanded), unicode=args.unicode))
    return 0


def _cmd_enumerate(args) -> int:
    alphabet = tuple(a for a in args.alphabet.split(",") if a)
    count = 0
    for p in enumerate_processes(args.max_size, alphabet, _state_cap()):
        count += 1
        if not args.count_only:
            print(render(p))
    if args.count_only:
        print(count)
    return 0


def _cmd_selftest(args) -> int:
    alphabet = tuple(a for a in args.alphabet.split(",") if a)
    reports = selfcheck.run_selftest(args.max_size, alphabet)
    ok = True
    for report in reports:
        print(report.line())
        ok = ok and report.ok
    return 0 if ok else 1


def _add_term_flags(sub) -> None:
    sub.add_argument("--allow-illformed", action="store_true",
                     help="skip the well-formedness check after parsing")
    sub.add_argument("--unicode", action="store_true",
                     help="render executed actions with a dagger")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revexp",
        description="Workbench for concurrent reversible processes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check", help="decide a bisimilarity between two processes")
    sub.add_argument("--variant", choices=sorted(_VARIANTS), required=True)
    sub.add_argument("p1")
    sub.add_argument("p2")
    sub.add_argument("--witness", action="store_true",
                     help="print the witness partition when equivalent")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_check)

    sub = subs.add_parser("lts", help="build and export a transition system")
    sub.add_argument("process")
    sub.add_argument("--format", choices=("dot", "json"), default="dot")
    sub.add_argument("--brs", action="store_true",
                     help="build the system of the ready-set encoding instead")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_lts)

    sub = subs.add_parser("encode", help="ready-set encoding of a process")
    sub.add_argument("process")
    sub.add_argument("--order", default="lex",
                     help="serialization order: 'lex' or 'file:<path>' with one proof term per line")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_encode)

    sub = subs.add_parser("normalize", help="normal form in one of the three theories")
    sub.add_argument("--theory", choices=sorted(_THEORIES), required=True)
    sub.add_argument("process")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_normalize)

    sub = subs.add_parser("prove", help="equality in one of the three axiom systems")
    sub.add_argument("--theory", choices=sorted(_THEORIES), required=True)
    sub.add_argument("p1")
    sub.add_argument("p2")
    sub.add_argument("--trace", action="store_true",
                     help="print the axiom applications used")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_prove)

    sub = subs.add_parser(
        "expand",
        help="interleaving expansion of a parallel composition of two processes",
    )
    sub.add_argument("p1")
    sub.add_argument("p2")
    sub.add_argument("--sync", default="",
                     help="comma-separated synchronization set")
    _add_term_flags(sub)
    sub.set_defaults(fn=_cmd_expand)

    sub = subs.add_parser("enumerate", help="stream the bounded process family")
    sub.add_argument("--max-size", type=int, required=True)
    sub.add_argument("--alphabet", required=True)
    sub.add_argument("--count-only", action="store_true")
    sub.set_defaults(fn=_cmd_enumerate)

    sub = subs.add_parser("selftest", help="run the differential oracle suites")
    sub.add_argument("--max-size", type=int, required=True)
    sub.add_argument("--alphabet", default="a,b")
    sub.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except RevexpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
