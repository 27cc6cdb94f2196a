"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 inaction / invalid access /
not total, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import generators, transforms
from .functions import NotTotal, extract_function, parity
from .isa import IllegalInstruction, ParseError, max_aux_index, parse, render
from .machine import Terminated
from .reports import RunReport, dumps, outcome_line, write_report
from .search import PruneRule, SearchAborted, SearchConstraints, minimal_length

log = logging.getLogger("regseq")

EXIT_OK, EXIT_USAGE, EXIT_NOT_TERMINATED, EXIT_ABORTED = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _bits(text: str) -> str:
    if set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"not a bit string: {text!r}")
    return text


def _read_program(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse(text)


def cmd_run(args) -> int:
    x = _read_program(args.program)
    report, t = RunReport.from_run(x, args.inputs, max_aux_index(x), with_trace=args.trace)
    if args.trace:
        for e in t.entries:
            reply = "-" if e.reply is None else int(e.reply)
            print(f"{e.position} {e.instruction} reply={reply}")
    print(outcome_line(t.outcome))
    if args.report:
        write_report(report.to_dict(), args.report)
    return EXIT_OK if isinstance(t.outcome, Terminated) else EXIT_NOT_TERMINATED


def cmd_table(args) -> int:
    x = _read_program(args.program)
    got = extract_function(x, args.n)
    if isinstance(got, NotTotal):
        bits = "".join("1" if b else "0" for b in got.inputs)
        print(f"not-total input={bits}")
        return EXIT_NOT_TERMINATED
    print(got)
    return EXIT_OK


def cmd_gen(args) -> int:
    print(render(generators.parity_program(args.variant, args.n)))
    return EXIT_OK


def _prune_rules(text: str) -> frozenset:
    if not text:
        return frozenset()
    try:
        return frozenset(PruneRule(p.strip()) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"unknown prune rule: {exc}") from None


def cmd_min(args) -> int:
    if args.function != "parity":
        raise UsageError(f"unknown function {args.function!r}")
    c = SearchConstraints(args.n, args.aux, allow_neg=not args.no_neg,
                          max_len=args.max_len, pruning=_prune_rules(args.prune))

    def progress(res):
        log.info("length %d: %s of %d candidates compute", res.length,
                 res.computing, res.candidates)

    profile = minimal_length(parity(args.n), c, workers=args.jobs, min_len=args.min_len,
                             target_name="parity", progress=progress)
    doc = profile.to_dict()
    if args.out:
        write_report(doc, args.out)
    ml = profile.minimal_length
    print(f"minimal_length={ml if ml is not None else 'none'}")
    if profile.witness is not None:
        print(f"witness={render(profile.witness)}")
    if not args.out:
        sys.stdout.write(dumps(doc))
    return EXIT_OK


def cmd_transform(args) -> int:
    x = _read_program(args.program)
    if args.kind == "complement":
        if args.n is None:
            raise UsageError("complement needs -n")
        y = transforms.complement_transform(x, args.n)
    elif args.kind == "strip":
        y = transforms.strip_skips(x)
    else:
        if args.input is None or args.value is None:
            raise UsageError("eliminate needs --input and --value")
        y = transforms.eliminate_input(x, args.input, args.value == "1")
    print(render(y))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regseq", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a program on one input vector")
    run.add_argument("program")
    run.add_argument("--inputs", type=_bits, required=True,
                     help="bit j (leftmost first) is in:j; its length sets n")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--report", help="also write a JSON run report here")
    run.set_defaults(func=cmd_run)

    table = sub.add_parser("table", help="truth table of a program")
    table.add_argument("program")
    table.add_argument("-n", type=int, required=True)
    table.set_defaults(func=cmd_table)

    gen = sub.add_parser("gen", help="emit a parity program")
    gen.add_argument("family", choices=["parity"])
    gen.add_argument("--variant", choices=[v.value for v in generators.Variant], required=True)
    gen.add_argument("-n", type=int, required=True)
    gen.set_defaults(func=cmd_gen)

    mn = sub.add_parser("min", help="exhaustive minimal-length search")
    mn.add_argument("--function", default="parity")
    mn.add_argument("-n", type=int, required=True)
    mn.add_argument("--aux", type=int, default=0)
    mn.add_argument("--max-len", type=int, required=True)
    mn.add_argument("--min-len", type=int, default=1)
    mn.add_argument("--no-neg", action="store_true")
    mn.add_argument("--jobs", type=int, default=1)
    mn.add_argument("--prune", default="",
                    help="comma list of: " + ",".join(r.value for r in PruneRule))
    mn.add_argument("--out")
    mn.set_defaults(func=cmd_min)

    tr = sub.add_parser("transform", help="rewrite a program")
    tr.add_argument("kind", choices=["complement", "strip", "eliminate"])
    tr.add_argument("program")
    tr.add_argument("-n", type=int)
    tr.add_argument("--input", type=int)
    tr.add_argument("--value", choices=["0", "1"])
    tr.set_defaults(func=cmd_transform)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ParseError, IllegalInstruction, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED


if __name__ == "__main__":
    sys.exit(main())
