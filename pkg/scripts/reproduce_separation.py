#!/usr/bin/env python3
"""Decide parity at arity n twice, once without auxiliary registers and once
with a single auxiliary register plus complement, both within 2n+3
instructions.  Prints one JSON statement combining the two reports.

    python scripts/reproduce_separation.py -n 2 --out-dir reports/
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from regseq.functions import parity
from regseq.reports import separation_statement, write_report
from regseq.search import PruneRule, SearchConstraints, minimal_length


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--unpruned", action="store_true",
                   help="decide the no-aux side by visiting every candidate")
    p.add_argument("--out-dir", type=Path)
    args = p.parse_args(argv)

    budget = 2 * args.n + 3
    memo = {PruneRule.FRONTIER_MEMO}
    f = parity(args.n)
    no_aux = minimal_length(
        f, SearchConstraints(args.n, 0, max_len=budget, pruning=set() if args.unpruned else memo),
        workers=args.jobs, target_name="parity").to_dict()
    one_aux = minimal_length(
        f, SearchConstraints(args.n, 1, allow_neg=True, max_len=budget, pruning=memo),
        workers=args.jobs, min_len=budget, target_name="parity").to_dict()
    statement = separation_statement(no_aux, one_aux)

    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        write_report(no_aux, args.out_dir / f"parity{args.n}_aux0.json")
        write_report(one_aux, args.out_dir / f"parity{args.n}_aux1.json")
        write_report(statement, args.out_dir / f"parity{args.n}_separation.json")
    print(json.dumps(statement, indent=2, sort_keys=True))
    return 0 if statement["certified"] else 1


if __name__ == "__main__":
    sys.exit(main())
