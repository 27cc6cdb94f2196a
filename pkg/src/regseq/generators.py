"""The two parity program families.

``pis0(n)`` uses no auxiliary register and has length 5n-2 (n >= 1): the
input registers are read in order, by a positive test while the parity of
the bits read so far is false and by a negative test otherwise.

``pis1(n)`` keeps the running parity in ``aux:1`` and has length 2n+3.
"""

from __future__ import annotations

import contextlib
import enum
import gc

from .isa import (
    HALT, OUT, BasicInstruction, Command, InstructionSequence, Jump, NegTest,
    Plain, PosTest, aux, inp,
)


class Variant(enum.Enum):
    PIS0 = "pis0"
    PIS1 = "pis1"


SET_OUT_TRUE = Plain(BasicInstruction(OUT, Command.SET_TRUE))


def _get(i: int) -> BasicInstruction:
    return BasicInstruction(inp(i), Command.GET)


_J3, _J4 = Jump(3), Jump(4)
_FLIP_AUX = Plain(BasicInstruction(aux(1), Command.NEG))


def _pis0_block(i: int) -> tuple:
    g = _get(i)
    return (_J4, PosTest(g), _J3, _J3, NegTest(g))


def _pis1_block(i: int) -> tuple:
    return (PosTest(_get(i)), _FLIP_AUX)


_PIS1_TAIL = (PosTest(BasicInstruction(aux(1), Command.GET)), SET_OUT_TRUE, HALT)
_PIS0_BLOCK_LEN = len(_pis0_block(1))
_PIS1_BLOCK_LEN = len(_pis1_block(1))


@contextlib.contextmanager
def _no_gc():
    # building millions of small acyclic objects; cyclic GC passes only cost time
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def pis0(n: int) -> InstructionSequence:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return InstructionSequence((HALT,))
    if n == 1:
        return InstructionSequence((PosTest(_get(1)), SET_OUT_TRUE, HALT))
    items = [PosTest(_get(1))]
    with _no_gc():
        for i in range(2, n + 1):
            items += _pis0_block(i)
    items += [SET_OUT_TRUE, HALT]
    return InstructionSequence(tuple(items))


def pis1(n: int) -> InstructionSequence:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return InstructionSequence((HALT,))
    items = []
    with _no_gc():
        for i in range(1, n + 1):
            items += _pis1_block(i)
    items += _PIS1_TAIL
    return InstructionSequence(tuple(items))


def parity_program(variant: Variant | str, n: int) -> InstructionSequence:
    return pis0(n) if Variant(variant) is Variant.PIS0 else pis1(n)


def pis0_size(n: int) -> int:
    """Length of pis0(n) from its part lengths, without building it."""
    if n <= 1:
        return 1 if n == 0 else 3
    return 1 + (n - 1) * _PIS0_BLOCK_LEN + 2


def pis1_size(n: int) -> int:
    if n == 0:
        return 1
    return n * _PIS1_BLOCK_LEN + len(_PIS1_TAIL)
