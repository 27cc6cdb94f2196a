"""Program transformations: input-test complementation, removal of ``#1``
skips with jump relocation, elimination of a fixed input, and masking of
unreachable positions."""

from __future__ import annotations

from dataclasses import dataclass

from .isa import (
    HALT, BasicForm, BasicInstruction, Command, InstructionSequence, Jump,
    NegTest, Plain, PosTest, RegKind, inp, max_aux_index,
)
from .machine import fresh_environment, inputs_from_index, trace


def _input_get_index(ins) -> int | None:
    """Input index if ``ins`` is a plain or test form of ``in:i.get``."""
    if isinstance(ins, BasicForm) and ins.basic.register.kind is RegKind.INPUT:
        return ins.basic.register.index
    return None


def complement_transform(x: InstructionSequence, n: int) -> InstructionSequence:
    """Swap positive and negative tests on inputs so that a program for
    parity(n) becomes one for its complement, at the same length.

    For odd n every input is flipped; for even n only ``in:1``.
    """
    if n < 1:
        raise ValueError("complement_transform needs n >= 1")
    if max_aux_index(x):
        raise ValueError("complement_transform applies to programs without aux registers")
    flipped = set(range(1, n + 1)) if n % 2 else {1}
    items = []
    for ins in x.items:
        if _input_get_index(ins) in flipped:
            if isinstance(ins, PosTest):
                ins = NegTest(ins.basic)
            elif isinstance(ins, NegTest):
                ins = PosTest(ins.basic)
        items.append(ins)
    return InstructionSequence(tuple(items))


@dataclass(frozen=True)
class RelocationMap:
    """Old 1-based position -> new position, or None when deleted."""

    new_position: tuple[int | None, ...]  # index 0 unused
    new_length: int

    def image(self, old: int) -> int | None:
        return self.new_position[old]

    def landing(self, old_target: int) -> int | None:
        """New position control reaches when it arrives at ``old_target``:
        the first kept position at or after it (a deleted ``#1`` passes
        control on).  None means past the end."""
        for p in range(old_target, len(self.new_position)):
            if self.new_position[p] is not None:
                return self.new_position[p]
        return None


def relocation_map(keep: list[bool]) -> RelocationMap:
    new, count = [None], 0
    for k in keep:
        if k:
            count += 1
            new.append(count)
        else:
            new.append(None)
    return RelocationMap(tuple(new), count)


def _strip_once(x: InstructionSequence) -> InstructionSequence:
    items = x.items
    size = len(items)
    keep = [not (isinstance(ins, Jump) and ins.offset == 1) for ins in items]
    rmap = relocation_map(keep)
    if rmap.new_length == 0:
        # nothing but skips: control runs off the end immediately
        return InstructionSequence((Jump(0),))
    out = []
    for p, ins in enumerate(items, start=1):
        if not keep[p - 1]:
            continue
        here = rmap.image(p)
        if isinstance(ins, Jump) and ins.offset > 0:
            target = p + ins.offset
            land = rmap.landing(target) if target <= size else None
            if land is None:
                ins = Jump(rmap.new_length - here + 1)
            else:
                ins = Jump(land - here)
        elif isinstance(ins, (PosTest, NegTest)) and p < size and not keep[p]:
            # both branches now reach the same instruction
            ins = Plain(ins.basic)
        out.append(ins)
    return InstructionSequence(tuple(out))


def _has_skip(x: InstructionSequence) -> bool:
    return any(isinstance(ins, Jump) and ins.offset == 1 for ins in x.items)


def strip_skips(x: InstructionSequence) -> InstructionSequence:
    """Delete every ``#1`` and retarget the remaining jumps, to a fixpoint.

    A test whose next instruction is deleted becomes plain, since both of
    its continuations then coincide.  Jumps that overshoot the end are
    rewritten to the smallest overshooting offset.
    """
    while _has_skip(x):
        x = _strip_once(x)
    return x


def eliminate_input(x: InstructionSequence, i: int, v: bool) -> InstructionSequence:
    """Specialise ``x`` to ``in:i = v`` and drop input i.

    Tests on in:i become the jump they would take (``#1`` to proceed, ``#2``
    to skip); the skips are stripped and inputs above i renumbered down.
    """
    if i < 1:
        raise ValueError("input index must be >= 1")
    items = []
    for ins in x.items:
        if _input_get_index(ins) == i:
            if isinstance(ins, PosTest):
                ins = Jump(1 if v else 2)
            elif isinstance(ins, NegTest):
                ins = Jump(2 if v else 1)
            else:
                ins = Jump(1)
        items.append(ins)
    y = strip_skips(InstructionSequence(tuple(items)))
    renumbered = []
    for ins in y.items:
        j = _input_get_index(ins)
        if j is not None and j > i:
            ins = type(ins)(BasicInstruction(inp(j - 1), Command.GET))
        renumbered.append(ins)
    return InstructionSequence(tuple(renumbered))


def reachable_positions(x: InstructionSequence, n: int) -> set[int]:
    k = max_aux_index(x)
    seen: set[int] = set()
    for idx in range(1 << n):
        seen.update(trace(x, fresh_environment(inputs_from_index(idx, n), k)).positions)
    return seen


def mask_unreachable(x: InstructionSequence, n: int) -> InstructionSequence:
    """Replace every position no execution on n inputs visits by ``!``."""
    seen = reachable_positions(x, n)
    return InstructionSequence(tuple(
        ins if p in seen else HALT for p, ins in enumerate(x.items, start=1)
    ))
