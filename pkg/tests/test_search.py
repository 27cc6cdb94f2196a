import itertools

import pytest

from regseq.functions import Computes, TruthTable, WrongOutput, computes, constant, parity
from regseq.generators import pis0, pis1
from regseq.isa import BasicInstruction, Command, aux, build_alphabet, inp, render
from regseq.search import (
    PruneRule, SearchAborted, SearchConstraints, exists_program, minimal_length,
    partition, search_length,
)
from regseq.search import core

from .oracles import brute_force_tally, smallest_witness


def all_tables(n):
    return [TruthTable(n, v) for v in range(1 << (1 << n))]


MEMO = frozenset({PruneRule.FRONTIER_MEMO})


# -- against brute force ------------------------------------------------------

@pytest.mark.parametrize("n,k,length", [
    (0, 0, 1), (0, 0, 2), (0, 0, 3), (0, 1, 3), (1, 0, 1), (1, 0, 2), (1, 0, 3),
    (1, 0, 4), (1, 1, 3), (2, 0, 2), (2, 0, 3), (2, 1, 2),
])
@pytest.mark.parametrize("memo", [False, True])
def test_counts_match_brute_force(n, k, length, memo):
    alphabet = build_alphabet(n, k, length)
    tally = brute_force_tally(alphabet, length, n)
    c = SearchConstraints(n, k, max_len=length, pruning=MEMO if memo else ())
    for f in all_tables(n):
        res = search_length(f, length, c)
        assert res.computing == tally[f], str(f)
        assert res.exists == (tally[f] > 0)
        assert res.candidates == res.raw_candidates == len(alphabet) ** length


@pytest.mark.parametrize("n,k,length", [(1, 0, 3), (1, 1, 3), (2, 0, 3)])
@pytest.mark.parametrize("memo", [False, True])
def test_witness_is_lexicographically_smallest(n, k, length, memo):
    alphabet = build_alphabet(n, k, length)
    c = SearchConstraints(n, k, max_len=length, pruning=MEMO if memo else ())
    for f in all_tables(n):
        expected = smallest_witness(alphabet, length, f)
        got = exists_program(f, length, c)
        assert (got.sequence if got else None) == expected


def test_no_neg_and_no_aux_set_flags():
    for allow_neg, allow_set in itertools.product([False, True], repeat=2):
        alphabet = build_alphabet(1, 1, 3, allow_neg=allow_neg, allow_aux_set=allow_set)
        tally = brute_force_tally(alphabet, 3, 1)
        c = SearchConstraints(1, 1, allow_neg=allow_neg, allow_aux_set=allow_set, max_len=3)
        for f in all_tables(1):
            assert search_length(f, 3, c).computing == tally[f]


# -- examples ------------------------------------------------------------------

def test_minimal_length_parity1():
    p = minimal_length(parity(1), SearchConstraints(1, 0, max_len=5))
    assert p.minimal_length == 3
    assert render(p.witness) == "+in:1.get ; out.set:t ; !"
    assert [r.exists for r in p.lengths] == [False, False, True]


def test_minimal_length_constant_false():
    p = minimal_length(constant(0, False), SearchConstraints(0, 0, max_len=2))
    assert p.minimal_length == 1 and render(p.witness) == "!"


def test_minimal_length_none_within_bound():
    p = minimal_length(parity(2), SearchConstraints(2, 0, max_len=4))
    assert p.minimal_length is None and p.witness is None
    assert len(p.lengths) == 4


def test_parity2_bounds_memo():
    c = SearchConstraints(2, 0, max_len=8, pruning=MEMO)
    assert exists_program(parity(2), 7, c) is None
    w = exists_program(parity(2), 8, c)
    assert w is not None and computes(w.sequence, parity(2)) == Computes()
    # the length-8 generator output lies in the searched space
    assert psize_ok(pis0(2), 8)


def psize_ok(x, length):
    return len(x) == length and all(s in build_alphabet(2, 0, length).symbols for s in x)


def test_parity2_with_aux_memo():
    c = SearchConstraints(2, 1, max_len=7, pruning=MEMO)
    res = search_length(parity(2), 6, c)
    assert not res.exists
    res = search_length(parity(2), 7, c)
    assert res.exists and res.computing > 0
    assert all(s in c.alphabet(7).symbols for s in pis1(2))


# -- partition -----------------------------------------------------------------

def test_partition_examples():
    a = build_alphabet(1, 0, 3)
    assert partition(3, a, 1) == [core.Shard(((),))]
    shards = partition(3, a, len(a))
    assert [s.prefixes for s in shards] == [((i,),) for i in range(len(a))]
    with pytest.raises(ValueError):
        partition(3, a, 0)


@pytest.mark.parametrize("count", [1, 2, 3, 7, 16, 40, 500, 10**5])
def test_partition_covers_space(count):
    a = build_alphabet(1, 0, 3)
    shards = partition(3, a, count)
    prefixes = [p for s in shards for p in s.prefixes]
    assert prefixes == sorted(prefixes)
    depth = len(prefixes[0])
    assert all(len(p) == depth for p in prefixes)
    assert prefixes == list(itertools.product(range(len(a)), repeat=depth))
    assert len(shards) == min(count, len(prefixes))


@pytest.mark.parametrize("memo", [False, True])
def test_shard_union_equals_unsharded(memo):
    c = SearchConstraints(2, 0, max_len=4, pruning=MEMO if memo else ())
    for f in all_tables(2):
        whole = search_length(f, 4, c, workers=1)
        for shard_count in (3, 29, 400):
            _, _, jobs = core._jobs_for(f, 4, c, shard_count, False, 10**12)
            parts = [core._run_job(j) for j in jobs]
            assert sum(p["computing"] for p in parts) == whole.computing
            wits = [p["witness"] for p in parts if p["witness"] is not None]
            assert (min(wits) if wits else None) == (
                tuple(c.alphabet(4).index(s) for s in whole.witness) if whole.witness else None)


# -- pruning soundness and sufficiency ------------------------------------------------

RULES = [PruneRule.DROP_JUMP0, PruneRule.DROP_JUMP1, PruneRule.DROP_PLAIN_INPUT_GET,
         PruneRule.CANONICAL_OVERSHOOT, PruneRule.FRONTIER_MEMO]


@pytest.mark.parametrize("rule", RULES, ids=lambda r: r.value)
def test_prune_rule_keeps_verdicts_small(rule):
    for n, k in ((1, 0), (1, 1), (2, 0)):
        base = SearchConstraints(n, k, max_len=3)
        pruned = SearchConstraints(n, k, max_len=3, pruning={rule})
        for f in all_tables(n):
            for length in (1, 2, 3):
                assert (search_length(f, length, base).exists
                        == search_length(f, length, pruned).exists), (rule, str(f), length)


def test_pruned_alphabets_shrink_candidate_space():
    c = SearchConstraints(2, 0, max_len=4, pruning=set(RULES) - {PruneRule.FRONTIER_MEMO})
    res = search_length(parity(2), 4, c)
    assert res.candidates < res.raw_candidates == 18 ** 4
    assert not res.exists


def test_pruned_space_counts_agree_between_engines():
    rules = set(RULES) - {PruneRule.FRONTIER_MEMO}
    for n, k in ((1, 1), (2, 0)):
        scan = SearchConstraints(n, k, max_len=4, pruning=rules)
        memo = SearchConstraints(n, k, max_len=4, pruning=rules | {PruneRule.FRONTIER_MEMO})
        for f in all_tables(n):
            a, b = search_length(f, 4, scan), search_length(f, 4, memo)
            assert (a.computing, a.candidates, a.witness) == (b.computing, b.candidates, b.witness)


def test_foreign_registers_add_no_verdicts():
    for n, k in ((1, 0), (1, 1), (2, 0)):
        foreign = (BasicInstruction(inp(n + 1), Command.GET),
                   BasicInstruction(aux(k + 1), Command.NEG))
        plain = SearchConstraints(n, k, max_len=4)
        wide = SearchConstraints(n, k, max_len=4, foreign=foreign)
        for f in all_tables(n):
            for length in range(1, 5 if n < 2 or k == 0 else 4):
                a, b = search_length(f, length, plain), search_length(f, length, wide)
                assert a.exists == b.exists
                assert b.candidates > a.candidates
                assert b.computing >= a.computing


# -- determinism, budget, firewall -----------------------------------------------

@pytest.mark.parametrize("memo", [False, True])
def test_worker_count_does_not_change_results(memo):
    c = SearchConstraints(1, 1, max_len=4, pruning=MEMO if memo else ())
    ref = None
    for workers in (1, 4, 16):
        p = minimal_length(parity(1), c, workers=workers)
        got = ([r.stats() for r in p.lengths], render(p.witness))
        ref = ref or got
        assert got == ref


@pytest.mark.parametrize("memo", [False, True])
def test_budget_abort(memo):
    c = SearchConstraints(2, 0, max_len=6, pruning=MEMO if memo else ())
    with pytest.raises(SearchAborted) as info:
        search_length(parity(2), 6, c, budget=1000)
    assert info.value.budget == 1000
    with pytest.raises(SearchAborted):
        exists_program(parity(2), 6, c, budget=1000)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("REGSEQ_STEP_BUDGET", "500")
    with pytest.raises(SearchAborted):
        minimal_length(parity(2), SearchConstraints(2, 0, max_len=5))


def test_witness_is_reverified(monkeypatch):
    monkeypatch.setattr(core, "computes", lambda x, f: WrongOutput((), False, True))
    with pytest.raises(RuntimeError, match="non-computing witness"):
        exists_program(parity(1), 3, SearchConstraints(1, 0, max_len=3))


def test_arity_mismatch_and_bad_length():
    with pytest.raises(ValueError):
        search_length(parity(1), 2, SearchConstraints(2, 0))
    with pytest.raises(ValueError):
        search_length(parity(1), 0, SearchConstraints(1, 0))
    with pytest.raises(ValueError):
        minimal_length(parity(1), SearchConstraints(1, 0, max_len=0))


def test_profile_document_shape():
    p = minimal_length(parity(1), SearchConstraints(1, 0, max_len=5, pruning=MEMO),
                       target_name="parity")
    doc = p.to_dict()
    assert doc["schema_version"] == 1 and doc["kind"] == "minimality_profile"
    assert doc["target"]["table"] == "n=1 bits=01"
    assert doc["pruning"] == ["frontier_memo"]
    assert doc["minimal_length"] == 3
    assert [r["length"] for r in doc["lengths"]] == [1, 2, 3]
    assert doc["alphabet"]["size_by_length"] == {"1": 12, "2": 13, "3": 14}
    assert set(doc["run"]) >= {"workers", "wall_time_s", "started_at", "finished_at"}
