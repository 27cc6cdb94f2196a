"""Versioned JSON documents: run reports, search reports, and the combined
separation statement built from a pair of search reports."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .isa import InstructionSequence, parse, render
from .machine import (
    Inaction, InvalidAccess, Outcome, Terminated, Trace, fresh_environment, trace,
)
from .search import SCHEMA_VERSION

RUN_KIND = "run_report"
SEARCH_KIND = "minimality_profile"
# fields that legitimately differ between otherwise identical runs
VOLATILE = ("run",)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def outcome_dict(o: Outcome) -> dict:
    if isinstance(o, Terminated):
        return {"status": "terminated", "output": o.output}
    if isinstance(o, Inaction):
        return {"status": "inaction", "position": o.position}
    return {"status": "invalid_access", "position": o.position, "register": str(o.register)}


def outcome_line(o: Outcome) -> str:
    if isinstance(o, Terminated):
        return f"terminated out={int(o.output)}"
    if isinstance(o, Inaction):
        return "inaction"
    return f"invalid-access position={o.position} register={o.register}"


@dataclass(frozen=True)
class RunReport:
    program: InstructionSequence
    inputs: str
    k_aux: int
    outcome: dict
    trace: tuple | None = None

    @classmethod
    def from_run(cls, x: InstructionSequence, bits: str, k_aux: int,
                 with_trace: bool = False) -> tuple["RunReport", Trace]:
        t = trace(x, fresh_environment([c == "1" for c in bits], k_aux))
        steps = None
        if with_trace:
            steps = tuple((e.position, str(e.instruction), e.reply) for e in t.entries)
        return cls(x, bits, k_aux, outcome_dict(t.outcome), steps), t

    def to_dict(self) -> dict:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": RUN_KIND,
            "program": render(self.program),
            "environment": {"inputs": self.inputs, "k_aux": self.k_aux},
            "outcome": self.outcome,
        }
        if self.trace is not None:
            doc["trace"] = [{"position": p, "instruction": i, "reply": r}
                            for p, i, r in self.trace]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RunReport":
        _check(doc, RUN_KIND)
        steps = doc.get("trace")
        if steps is not None:
            steps = tuple((s["position"], s["instruction"], s["reply"]) for s in steps)
        env = doc["environment"]
        return cls(parse(doc["program"]), env["inputs"], env["k_aux"], doc["outcome"], steps)


def _check(doc: dict, kind: str) -> None:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    if doc.get("kind") != kind:
        raise ValueError(f"expected a {kind} document, got {doc.get('kind')!r}")


def write_report(doc: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc))


def load_search_report(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    _check(doc, SEARCH_KIND)
    return doc


def stable_part(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k not in VOLATILE}


def _verdicts(doc: dict) -> dict[int, bool]:
    return {r["length"]: r["exists"] for r in doc["lengths"]}


def separation_statement(no_aux: dict, one_aux: dict) -> dict:
    """Combine a no-aux and a one-aux search report into one verdict about
    the budget 2n+3.

    Certified when the no-aux report searched every length up to the
    budget without finding a program and the one-aux report (with
    complement instructions) holds a program within the budget.
    """
    _check(no_aux, SEARCH_KIND)
    _check(one_aux, SEARCH_KIND)
    n = no_aux["target"]["arity"]
    budget = 2 * n + 3
    problems = []
    if no_aux["target"]["table"] != one_aux["target"]["table"]:
        problems.append("reports have different targets")
    if no_aux["constraints"]["k_aux"] != 0:
        problems.append("first report uses auxiliary registers")
    if one_aux["constraints"]["k_aux"] != 1 or not one_aux["constraints"]["allow_neg"]:
        problems.append("second report is not one aux register with complement")
    seen = _verdicts(no_aux)
    missing = [L for L in range(1, budget + 1) if L not in seen]
    if missing:
        problems.append(f"no-aux report lacks lengths {missing}")
    found = [L for L in range(1, budget + 1) if seen.get(L)]
    if found:
        problems.append(f"no-aux report has programs at lengths {found}")
    aux_hits = [L for L, ok in _verdicts(one_aux).items() if ok and L <= budget]
    if not aux_hits:
        problems.append(f"one-aux report has no program of length <= {budget}")
    certified = not problems
    table = no_aux["target"]["table"]
    if certified:
        text = (f"{table}: budget {budget} = 2n+3; no aux register: no program of length "
                f"<= {budget} (exhaustive); one aux register with complement: program of "
                f"length {min(aux_hits)} ({one_aux['witness']}); separation holds at n={n}")
    else:
        text = f"{table}: separation not certified: " + "; ".join(problems)
    return {"certified": certified, "n": n, "budget": budget, "statement": text,
            "no_aux_pruning": no_aux["pruning"], "one_aux_pruning": one_aux["pruning"]}
