"""Boolean functions as truth tables and the computes relation.

Table index ``i`` encodes the input vector with b1 as the least significant
bit.  Text form: ``n=<N> bits=<bit for index 0><bit for index 1>...``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Union

from .isa import InstructionSequence, max_aux_index
from .machine import (
    Outcome, compile_program, execute, fresh_environment,
    inputs_from_index, run_compiled,
)

MAX_ARITY = 24


class ArityError(ValueError):
    pass


def _check_arity(n: int, cap: int) -> None:
    if n < 0:
        raise ArityError("arity must be >= 0")
    if n > cap:
        raise ArityError(f"arity {n} exceeds cap {cap}")


@dataclass(frozen=True)
class TruthTable:
    arity: int
    value: int  # bit i is f at table index i

    def __post_init__(self):
        if self.value < 0 or self.value >> (1 << self.arity):
            raise ValueError("table value has bits beyond 2^arity")

    @property
    def size(self) -> int:
        return 1 << self.arity

    def bit(self, index: int) -> bool:
        return bool(self.value >> index & 1)

    def __call__(self, *bs: bool) -> bool:
        return self.bit(sum(int(b) << j for j, b in enumerate(bs)))

    @property
    def bits(self) -> str:
        return "".join("1" if self.value >> i & 1 else "0" for i in range(self.size))

    def __str__(self) -> str:
        return f"n={self.arity} bits={self.bits}"

    def digest(self) -> str:
        return hashlib.sha256(str(self).encode()).hexdigest()

    @classmethod
    def from_bits(cls, bits: str) -> "TruthTable":
        n = len(bits).bit_length() - 1
        if len(bits) != 1 << n or set(bits) - {"0", "1"}:
            raise ValueError(f"not a truth table bit string: {bits!r}")
        return cls(n, sum(1 << i for i, c in enumerate(bits) if c == "1"))

    @classmethod
    def from_function(cls, n: int, fn) -> "TruthTable":
        return cls(n, sum(1 << i for i in range(1 << n) if fn(*inputs_from_index(i, n))))


_TABLE_RE = re.compile(r"n=(\d+) bits=([01]+)\Z")


def parse_table(text: str) -> TruthTable:
    m = _TABLE_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed truth table: {text!r}")
    table = TruthTable.from_bits(m.group(2))
    if table.arity != int(m.group(1)):
        raise ValueError("bit count does not match n")
    return table


def constant(n: int, value: bool) -> TruthTable:
    return TruthTable(n, (1 << (1 << n)) - 1 if value else 0)


def parity(n: int, cap: int = MAX_ARITY) -> TruthTable:
    _check_arity(n, cap)
    # parity over n+1 inputs: the n-input table, then its complement
    value, width = 0, 1
    for _ in range(n):
        value |= (~value & ((1 << width) - 1)) << width
        width <<= 1
    return TruthTable(n, value)


def complement(f: TruthTable) -> TruthTable:
    return TruthTable(f.arity, ~f.value & ((1 << f.size) - 1))


@dataclass(frozen=True)
class Computes:
    pass


@dataclass(frozen=True)
class WrongOutput:
    inputs: tuple[bool, ...]
    got: bool
    expected: bool


@dataclass(frozen=True)
class NotTotal:
    inputs: tuple[bool, ...]
    outcome: Outcome


ComputeVerdict = Union[Computes, WrongOutput, NotTotal]


def extract_function(x: InstructionSequence, n: int,
                     cap: int = MAX_ARITY) -> TruthTable | NotTotal:
    """Run ``x`` on all 2^n start environments (k = highest aux index used)."""
    _check_arity(n, cap)
    k = max_aux_index(x)
    code = compile_program(x, n, k)
    value = 0
    for i in range(1 << n):
        status, regs, _ = run_compiled(code, i << 1)
        if status:
            inputs = inputs_from_index(i, n)
            return NotTotal(inputs, execute(x, fresh_environment(inputs, k)))
        value |= (regs & 1) << i
    return TruthTable(n, value)


def computes(x: InstructionSequence, f: TruthTable) -> ComputeVerdict:
    got = extract_function(x, f.arity)
    if isinstance(got, NotTotal):
        return got
    diff = got.value ^ f.value
    if not diff:
        return Computes()
    i = (diff & -diff).bit_length() - 1
    return WrongOutput(inputs_from_index(i, f.arity), got.bit(i), f.bit(i))
