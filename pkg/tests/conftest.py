import random

import pytest
from hypothesis import strategies as st

from regseq.isa import BasicInstruction, Command, InstructionSequence, aux, build_alphabet, inp

_results: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _results.append((marker.args[0], marker.args[1], status))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(_results):
        terminalreporter.write_line(f"criterion {number:>2} {status}: {title}")


# -- random programs --------------------------------------------------------

def alphabet_for(n, k, max_jump, foreign=False):
    extra = []
    if foreign:
        extra = [BasicInstruction(inp(n + 1), Command.GET),
                 BasicInstruction(aux(k + 1), Command.NEG)]
    return build_alphabet(n, k, max_jump, extra=extra)


def random_program(rng: random.Random, symbols, max_len: int) -> InstructionSequence:
    length = rng.randint(1, max_len)
    return InstructionSequence(tuple(rng.choice(symbols) for _ in range(length)))


@st.composite
def programs(draw, max_n=3, max_k=2, max_len=10, foreign=True):
    n = draw(st.integers(0, max_n))
    k = draw(st.integers(0, max_k))
    a = alphabet_for(n, k, max_len + 1, foreign=foreign)
    items = draw(st.lists(st.sampled_from(a.symbols), min_size=1, max_size=max_len))
    return InstructionSequence(tuple(items))
