from __future__ import annotations

import enum
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from ..functions import Computes, TruthTable, computes
from ..isa import (
    Alphabet, BasicForm, BasicInstruction, InstructionSequence, Jump,
    build_alphabet, render,
)
from ..machine import encode_instruction
from . import kernel
from .frontier import BudgetExceeded, FrontierCounter

SCHEMA_VERSION = 1
DEFAULT_STEP_BUDGET = 10**12


class PruneRule(enum.Enum):
    # Each rule only removes candidates that have an equal-or-shorter
    # equivalent inside the kept space; existence at a fixed length is
    # monotone (append "!" to a computing program), so verdicts are kept.
    DROP_JUMP0 = "drop_jump0"  # #0 is never executed by a computing program
    DROP_JUMP1 = "drop_jump1"  # strip_skips gives a shorter #1-free equivalent
    DROP_PLAIN_INPUT_GET = "drop_plain_input_get"  # acts exactly like #1
    CANONICAL_OVERSHOOT = "canonical_overshoot"  # all overshooting offsets coincide
    FRONTIER_MEMO = "frontier_memo"  # exact counting over shared frontiers


class SearchAborted(RuntimeError):
    def __init__(self, steps: int, budget: int):
        super().__init__(f"search aborted: {steps} VM steps exceed budget {budget}")
        self.steps = steps
        self.budget = budget


def default_step_budget() -> int:
    value = os.environ.get("REGSEQ_STEP_BUDGET")
    return int(float(value)) if value else DEFAULT_STEP_BUDGET


@dataclass(frozen=True)
class SearchConstraints:
    n_inputs: int
    k_aux: int = 0
    allow_neg: bool = True
    allow_aux_set: bool = True
    max_len: int = 8
    pruning: frozenset = frozenset()
    # basic instructions on registers outside in:1..n / aux:1..k; they can
    # only fail, and exist to test that excluding them is harmless
    foreign: tuple[BasicInstruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pruning", frozenset(PruneRule(p) for p in self.pruning))

    def has(self, rule: PruneRule) -> bool:
        return rule in self.pruning

    def alphabet(self, length: int, *, filtered: bool = True) -> Alphabet:
        on = filtered
        return build_alphabet(
            self.n_inputs, self.k_aux, length,
            allow_neg=self.allow_neg, allow_aux_set=self.allow_aux_set,
            drop_jump0=on and self.has(PruneRule.DROP_JUMP0),
            drop_jump1=on and self.has(PruneRule.DROP_JUMP1),
            drop_plain_input_get=on and self.has(PruneRule.DROP_PLAIN_INPUT_GET),
            extra=self.foreign,
        )

    def allowed(self, alphabet: Alphabet, length: int) -> list[list[int]]:
        """Admitted symbol indices per 0-based position."""
        out = []
        for d in range(length):
            row = []
            for s, ins in enumerate(alphabet.symbols):
                if (self.has(PruneRule.CANONICAL_OVERSHOOT) and isinstance(ins, Jump)
                        and ins.offset > length - d):
                    continue
                row.append(s)
            out.append(row)
        return out

    def describe(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "k_aux": self.k_aux,
            "allow_neg": self.allow_neg,
            "allow_aux_set": self.allow_aux_set,
            "max_len": self.max_len,
            "foreign": [str(b) for b in self.foreign],
        }


# -- sharding ---------------------------------------------------------------

@dataclass(frozen=True)
class Shard:
    """A contiguous run of leading-symbol prefixes in lexicographic order."""

    prefixes: tuple[tuple[int, ...], ...]


def partition(length: int, alphabet: Alphabet, shard_count: int,
              allowed: list[list[int]] | None = None) -> list[Shard]:
    if shard_count < 1:
        raise ValueError("shard_count must be >= 1")
    if allowed is None:
        allowed = [list(range(len(alphabet)))] * length
    prefixes: list[tuple[int, ...]] = [()]
    depth = 0
    while len(prefixes) < shard_count and depth < length:
        prefixes = [p + (s,) for p in prefixes for s in allowed[depth]]
        depth += 1
    count = min(shard_count, len(prefixes))
    shards, start = [], 0
    for i in range(count):
        size = len(prefixes) // count + (i < len(prefixes) % count)
        shards.append(Shard(tuple(prefixes[start:start + size])))
        start += size
    return shards


# -- one length -------------------------------------------------------------

@dataclass
class LengthResult:
    length: int
    raw_candidates: int
    candidates: int
    computing: int
    exists: bool
    witness: InstructionSequence | None
    complete: bool
    leaves_evaluated: int = 0
    steps: int = 0

    def stats(self) -> dict:
        return {
            "length": self.length,
            "raw_candidates": self.raw_candidates,
            "candidates": self.candidates,
            "computing": self.computing,
            "exists": self.exists,
        }


@dataclass(frozen=True)
class _Job:
    memo: bool
    codes: tuple
    allowed: tuple
    length: int
    targets: tuple
    regs0: tuple
    n_regs: int
    prefixes: tuple
    stop_at_first: bool
    budget: int


def _run_job(job: _Job) -> dict:
    if job.memo:
        return _run_memo(job)
    return _run_scan(job)


def _run_scan(job: _Job) -> dict:
    kind, slot, cmd, arg = kernel.symbol_arrays(job.codes)
    syms, counts = kernel.allowed_arrays(job.allowed)
    regs0 = np.asarray(job.regs0, np.int64)
    target = np.asarray(job.targets, np.int64)
    res = {"leaves": 0, "computing": 0, "witness": None, "steps": 0, "aborted": False}
    for prefix in job.prefixes:
        leaves, comp, found, wit, steps, aborted = kernel.scan(
            kind, slot, cmd, arg, syms, counts, job.length, regs0, target,
            np.asarray(prefix, np.int64), job.stop_at_first, False,
            job.budget - res["steps"])
        res["leaves"] += int(leaves)
        res["computing"] += int(comp)
        res["steps"] += int(steps)
        if found and res["witness"] is None:
            res["witness"] = tuple(int(s) for s in wit)
        if aborted:
            res["aborted"] = True
            break
        if found and job.stop_at_first:
            break
    return res


def _run_memo(job: _Job) -> dict:
    counter = FrontierCounter(job.codes, job.allowed, job.length, job.targets,
                              job.regs0, job.n_regs, job.budget)
    res = {"leaves": 0, "computing": 0, "witness": None, "steps": 0, "aborted": False}
    try:
        for prefix in job.prefixes:
            frontier = counter.apply_prefix(prefix)
            if frontier is None:
                continue
            found = counter.count(frontier, job.length - len(prefix))
            res["computing"] += found
            if found and res["witness"] is None:
                res["witness"] = counter.smallest_completion(prefix)
                if job.stop_at_first:
                    break
    except BudgetExceeded:
        res["aborted"] = True
    res["leaves"] = counter.leaves
    res["steps"] = counter.steps
    return res


def _jobs_for(f: TruthTable, length: int, c: SearchConstraints, shard_count: int,
              stop_at_first: bool, budget: int):
    if f.arity != c.n_inputs:
        raise ValueError("target arity must equal n_inputs")
    alphabet = c.alphabet(length)
    allowed = c.allowed(alphabet, length)
    codes = tuple(encode_instruction(s, c.n_inputs, c.k_aux) for s in alphabet.symbols)
    targets = tuple(int(f.bit(i)) for i in range(f.size))
    regs0 = tuple(i << 1 for i in range(f.size))
    shards = partition(length, alphabet, shard_count, allowed)
    jobs = [_Job(c.has(PruneRule.FRONTIER_MEMO), codes,
                 tuple(tuple(a) for a in allowed), length, targets, regs0,
                 1 + c.n_inputs + c.k_aux, sh.prefixes, stop_at_first, budget)
            for sh in shards]
    return alphabet, allowed, jobs


def _map(jobs: list[_Job], workers: int, stop_at_first: bool) -> list[dict]:
    if workers <= 1 or len(jobs) == 1:
        results = []
        for job in jobs:
            results.append(_run_job(job))
            if stop_at_first and results[-1]["witness"] is not None:
                break
            if results[-1]["aborted"]:
                break
        return results
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_job, jobs))


def shard_count_for(workers: int) -> int:
    return 1 if workers <= 1 else 4 * workers


def search_length(f: TruthTable, length: int, c: SearchConstraints, *,
                  workers: int = 1, stop_at_first: bool = False,
                  budget: int | None = None) -> LengthResult:
    """Decide (and, unless stopping at the first witness, count) the
    programs of exactly ``length`` computing ``f``."""
    if length < 1:
        raise ValueError("length must be >= 1")
    budget = default_step_budget() if budget is None else budget
    alphabet, allowed, jobs = _jobs_for(f, length, c, shard_count_for(workers),
                                        stop_at_first, budget)
    results = _map(jobs, workers, stop_at_first)
    steps = sum(r["steps"] for r in results)
    if any(r["aborted"] for r in results) or steps > budget:
        raise SearchAborted(steps, budget)
    witnesses = [r["witness"] for r in results if r["witness"] is not None]
    witness = None
    if witnesses:
        witness = InstructionSequence(tuple(alphabet.symbols[s] for s in min(witnesses)))
        if not isinstance(computes(witness, f), Computes):
            raise RuntimeError(f"search produced a non-computing witness: {render(witness)}")
    raw = len(c.alphabet(length, filtered=False)) ** length
    return LengthResult(
        length=length,
        raw_candidates=raw,
        candidates=math.prod(len(a) for a in allowed),
        computing=sum(r["computing"] for r in results),
        exists=witness is not None,
        witness=witness,
        complete=not stop_at_first,
        leaves_evaluated=sum(r["leaves"] for r in results),
        steps=steps,
    )


@dataclass(frozen=True)
class Witness:
    sequence: InstructionSequence
    verdict: Computes = Computes()


def exists_program(f: TruthTable, length: int, c: SearchConstraints, *,
                   workers: int = 1, budget: int | None = None) -> Witness | None:
    """Lexicographically smallest program of exactly ``length`` computing
    ``f``, or None.  Raises SearchAborted when the step budget runs out."""
    res = search_length(f, length, c, workers=workers, stop_at_first=True, budget=budget)
    return Witness(res.witness) if res.witness is not None else None


# -- minimality profiles ----------------------------------------------------

@dataclass
class MinimalityProfile:
    target: TruthTable
    target_name: str
    constraints: SearchConstraints
    min_len: int
    lengths: list[LengthResult] = field(default_factory=list)
    workers: int = 1
    wall_time: float = 0.0
    started_at: str = ""
    finished_at: str = ""

    @property
    def minimal_length(self) -> int | None:
        for r in self.lengths:
            if r.exists:
                return r.length
        return None

    @property
    def witness(self) -> InstructionSequence | None:
        for r in self.lengths:
            if r.exists:
                return r.witness
        return None

    def verdict(self, length: int) -> bool | None:
        for r in self.lengths:
            if r.length == length:
                return r.exists
        return None

    def to_dict(self) -> dict:
        c = self.constraints
        top = c.alphabet(c.max_len)
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "minimality_profile",
            "target": {
                "function": self.target_name,
                "arity": self.target.arity,
                "table": str(self.target),
                "sha256": self.target.digest(),
            },
            "constraints": dict(c.describe(), min_len=self.min_len),
            "pruning": sorted(p.value for p in c.pruning),
            "alphabet": {
                "basic_forms": [str(s) for s in top.symbols if isinstance(s, BasicForm)],
                "jumps": "#0..#length" + _jump_filter_note(c),
                "halt": True,
                "size_by_length": {str(r.length): len(c.alphabet(r.length))
                                   for r in self.lengths},
            },
            "lengths": [r.stats() for r in self.lengths],
            "minimal_length": self.minimal_length,
            "witness": render(self.witness) if self.witness is not None else None,
            "run": {
                "workers": self.workers,
                "shards": shard_count_for(self.workers),
                "started_at": self.started_at,
                "finished_at": self.finished_at,
                "wall_time_s": round(self.wall_time, 3),
                "leaves_evaluated": {str(r.length): r.leaves_evaluated for r in self.lengths},
                "steps": sum(r.steps for r in self.lengths),
            },
        }


def _jump_filter_note(c: SearchConstraints) -> str:
    dropped = [l for l, rule in ((0, PruneRule.DROP_JUMP0), (1, PruneRule.DROP_JUMP1))
               if c.has(rule)]
    return "".join(f" without #{l}" for l in dropped)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def minimal_length(f: TruthTable, c: SearchConstraints, *, workers: int = 1,
                   min_len: int = 1, budget: int | None = None,
                   target_name: str = "table", progress=None) -> MinimalityProfile:
    """Iterative deepening over lengths min_len..max_len, stopping at the
    first length with a computing program.  Every searched length is
    counted completely."""
    if c.max_len < 1 or min_len < 1:
        raise ValueError("lengths start at 1")
    budget = default_step_budget() if budget is None else budget
    profile = MinimalityProfile(f, target_name, c, min_len, workers=workers,
                                started_at=_now())
    t0 = time.perf_counter()
    spent = 0
    for length in range(min_len, c.max_len + 1):
        res = search_length(f, length, c, workers=workers, budget=budget - spent)
        spent += res.steps
        profile.lengths.append(res)
        if progress is not None:
            progress(res)
        if res.exists:
            break
    profile.wall_time = time.perf_counter() - t0
    profile.finished_at = _now()
    return profile

