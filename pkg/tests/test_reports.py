import copy
import json

import pytest

from regseq.functions import parity
from regseq.isa import parse
from regseq.reports import (
    RunReport, dumps, load_search_report, separation_statement, stable_part, write_report,
)
from regseq.search import PruneRule, SearchConstraints, minimal_length

MEMO = {PruneRule.FRONTIER_MEMO}


@pytest.fixture(scope="module")
def pair():
    no_aux = minimal_length(parity(2), SearchConstraints(2, 0, max_len=8, pruning=MEMO),
                            target_name="parity").to_dict()
    one_aux = minimal_length(parity(2), SearchConstraints(2, 1, max_len=7, pruning=MEMO),
                             min_len=7, target_name="parity").to_dict()
    return no_aux, one_aux


def test_separation_certified(pair):
    s = separation_statement(*pair)
    assert s["certified"] and s["n"] == 2 and s["budget"] == 7
    assert "length 7" in s["statement"]


def test_separation_rejects_bad_pairs(pair):
    no_aux, one_aux = pair
    assert not separation_statement(one_aux, one_aux)["certified"]
    short = copy.deepcopy(no_aux)
    short["lengths"] = short["lengths"][:5]
    s = separation_statement(short, one_aux)
    assert not s["certified"] and "lacks lengths [6, 7]" in s["statement"]
    fake = copy.deepcopy(no_aux)
    fake["lengths"][6]["exists"] = True
    assert not separation_statement(fake, one_aux)["certified"]
    with pytest.raises(ValueError):
        separation_statement(dict(no_aux, schema_version=99), one_aux)


def test_report_files_round_trip(pair, tmp_path):
    path = tmp_path / "r.json"
    write_report(pair[0], path)
    assert load_search_report(path) == json.loads(dumps(pair[0]))
    with pytest.raises(ValueError):
        write_report({"schema_version": 1, "kind": "run_report"}, path)
        load_search_report(path)


def test_rerun_is_stable_modulo_run_section():
    c = SearchConstraints(1, 1, max_len=4)
    a = minimal_length(parity(1), c, target_name="parity").to_dict()
    b = minimal_length(parity(1), c, workers=3, target_name="parity").to_dict()
    assert dumps(stable_part(a)) == dumps(stable_part(b))
    assert a["run"]["workers"] != b["run"]["workers"]


@pytest.mark.parametrize("bits,with_trace", [("10", True), ("01", False), ("", True)])
def test_run_report_round_trip(bits, with_trace):
    x = parse("+in:1.get ; #0 ; !") if bits else parse("!")
    report, _ = RunReport.from_run(x, bits, 0, with_trace=with_trace)
    doc = json.loads(dumps(report.to_dict()))
    assert RunReport.from_dict(doc) == report
