"""Instructions, instruction sequences and their text format.

Program text is a list of primitive instructions separated by `` ; `` (a
newline also separates on input)::

    +in:1.get ; #4 ; +in:2.get ; #3 ; #3 ; -in:2.get ; out.set:t ; !

Registers are ``in:i`` (read-only), ``out`` (write-only) and ``aux:i``
(get, set and complement).  All values here are immutable.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class RegKind(enum.Enum):
    INPUT = "in"
    OUTPUT = "out"
    AUX = "aux"


class Command(enum.Enum):
    GET = "get"
    SET_FALSE = "set:f"
    SET_TRUE = "set:t"
    NEG = "neg"


_LEGAL = {
    RegKind.INPUT: (Command.GET,),
    RegKind.OUTPUT: (Command.SET_FALSE, Command.SET_TRUE),
    RegKind.AUX: (Command.GET, Command.SET_FALSE, Command.SET_TRUE, Command.NEG),
}

_KIND_RANK = {RegKind.INPUT: 0, RegKind.OUTPUT: 1, RegKind.AUX: 2}
_CMD_RANK = {c: i for i, c in enumerate(Command)}


class ParseError(ValueError):
    """Malformed program text.  ``offset`` is a character offset into the input."""

    def __init__(self, message: str, offset: int, token: str = ""):
        super().__init__(f"{message} at offset {offset}" + (f": {token!r}" if token else ""))
        self.offset = offset
        self.token = token


class IllegalInstruction(ValueError):
    """A command applied to a register that does not admit it (e.g. ``out.get``)."""

    def __init__(self, message: str, token: str = ""):
        super().__init__(message)
        self.token = token


@dataclass(frozen=True)
class Register:
    kind: RegKind
    index: int | None = None

    def __post_init__(self):
        if self.kind is RegKind.OUTPUT:
            if self.index is not None:
                raise ValueError("the output register has no index")
        elif self.index is None or self.index < 1:
            raise ValueError(f"{self.kind.value} register needs an index >= 1")

    def __str__(self) -> str:
        if self.kind is RegKind.OUTPUT:
            return "out"
        return f"{self.kind.value}:{self.index}"

    def sort_key(self) -> tuple[int, int]:
        return (_KIND_RANK[self.kind], self.index or 0)


OUT = Register(RegKind.OUTPUT)


def inp(i: int) -> Register:
    return Register(RegKind.INPUT, i)


def aux(i: int) -> Register:
    return Register(RegKind.AUX, i)


@dataclass(frozen=True)
class BasicInstruction:
    register: Register
    command: Command

    def __post_init__(self):
        if self.command not in _LEGAL[self.register.kind]:
            raise IllegalInstruction(
                f"{self.register} does not admit {self.command.value}", str(self)
            )

    def __str__(self) -> str:
        return f"{self.register}.{self.command.value}"

    def sort_key(self) -> tuple:
        return self.register.sort_key() + (_CMD_RANK[self.command],)


@dataclass(frozen=True)
class Plain:
    basic: BasicInstruction

    def __str__(self) -> str:
        return str(self.basic)


@dataclass(frozen=True)
class PosTest:
    basic: BasicInstruction

    def __str__(self) -> str:
        return f"+{self.basic}"


@dataclass(frozen=True)
class NegTest:
    basic: BasicInstruction

    def __str__(self) -> str:
        return f"-{self.basic}"


@dataclass(frozen=True)
class Jump:
    offset: int

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("jump offset must be >= 0")

    def __str__(self) -> str:
        return f"#{self.offset}"


@dataclass(frozen=True)
class Halt:
    def __str__(self) -> str:
        return "!"


Instruction = Union[Plain, PosTest, NegTest, Jump, Halt]
BasicForm = (Plain, PosTest, NegTest)

HALT = Halt()
_MODE_RANK = {Plain: 0, PosTest: 1, NegTest: 2}


def symbol_key(ins: Instruction) -> tuple:
    """Canonical symbol order: basics (register, command, mode), then jumps
    by ascending offset, then termination."""
    if isinstance(ins, BasicForm):
        return (0,) + ins.basic.sort_key() + (_MODE_RANK[type(ins)],)
    if isinstance(ins, Jump):
        return (1, ins.offset)
    return (2,)


@dataclass(frozen=True)
class InstructionSequence:
    items: tuple[Instruction, ...]

    def __post_init__(self):
        if not isinstance(self.items, tuple):
            object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("an instruction sequence has at least one instruction")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def at(self, position: int) -> Instruction:
        """Instruction at a 1-based position."""
        return self.items[position - 1]

    def __str__(self) -> str:
        return render(self)


def seq(*items: Instruction) -> InstructionSequence:
    return InstructionSequence(tuple(items))


# -- text format ------------------------------------------------------------

_BASIC_RE = re.compile(r"(?:(in|aux):(\d+)|(out))\.(get|set:f|set:t|neg)\Z")
_JUMP_RE = re.compile(r"#(\d+)\Z")
_CMD_BY_TEXT = {c.value: c for c in Command}


def parse_instruction(token: str, offset: int = 0) -> Instruction:
    if token == "!":
        return HALT
    m = _JUMP_RE.match(token)
    if m:
        return Jump(int(m.group(1)))
    mode, body = Plain, token
    if token[:1] in "+-":
        mode = PosTest if token[0] == "+" else NegTest
        body = token[1:]
    m = _BASIC_RE.match(body)
    if not m:
        raise ParseError("malformed instruction", offset, token)
    if m.group(3):
        reg = OUT
    else:
        index = int(m.group(2))
        if index < 1:
            raise ParseError("register index must be >= 1", offset, token)
        reg = Register(RegKind(m.group(1)), index)
    try:
        basic = BasicInstruction(reg, _CMD_BY_TEXT[m.group(4)])
    except IllegalInstruction as exc:
        raise IllegalInstruction(f"{exc} (offset {offset})", token) from None
    return mode(basic)


def parse(text: str) -> InstructionSequence:
    """Parse program text.  Raises ParseError or IllegalInstruction."""
    items = []
    offset = 0
    for line in text.split("\n"):
        if line.strip():
            pos = offset
            for piece in line.split(";"):
                token = piece.strip()
                if not token:
                    raise ParseError("empty instruction", pos)
                items.append(parse_instruction(token, pos + piece.index(token)))
                pos += len(piece) + 1
        offset += len(line) + 1
    if not items:
        raise ParseError("empty program", 0)
    return InstructionSequence(tuple(items))


def render(x: InstructionSequence) -> str:
    return " ; ".join(str(ins) for ins in x.items)


# -- queries ----------------------------------------------------------------

def psize(x: InstructionSequence) -> int:
    return len(x.items)


def max_register_indices(x: InstructionSequence) -> tuple[int, int]:
    """Highest input index and highest auxiliary index mentioned (0 if none)."""
    max_in = max_aux = 0
    for ins in x.items:
        if isinstance(ins, BasicForm):
            reg = ins.basic.register
            if reg.kind is RegKind.INPUT:
                max_in = max(max_in, reg.index)
            elif reg.kind is RegKind.AUX:
                max_aux = max(max_aux, reg.index)
    return max_in, max_aux


def max_input_index(x: InstructionSequence) -> int:
    return max_register_indices(x)[0]


def max_aux_index(x: InstructionSequence) -> int:
    return max_register_indices(x)[1]


# -- alphabets --------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    """Ordered instruction alphabet for exhaustive search."""

    symbols: tuple[Instruction, ...]
    n_inputs: int
    k_aux: int
    max_jump: int
    allow_neg: bool = True
    allow_aux_set: bool = True
    drop_jump0: bool = False
    drop_jump1: bool = False
    drop_plain_input_get: bool = False

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, ins: Instruction) -> int:
        return self.symbols.index(ins)

    def describe(self) -> dict:
        basics = [str(s) for s in self.symbols if isinstance(s, BasicForm)]
        jumps = [s.offset for s in self.symbols if isinstance(s, Jump)]
        return {
            "n_inputs": self.n_inputs,
            "k_aux": self.k_aux,
            "max_jump": self.max_jump,
            "size": len(self.symbols),
            "basic_forms": basics,
            "jumps": jumps,
        }


def basic_instructions(n_inputs: int, k_aux: int, allow_neg: bool = True,
                       allow_aux_set: bool = True) -> list[BasicInstruction]:
    out = [BasicInstruction(inp(i), Command.GET) for i in range(1, n_inputs + 1)]
    out += [BasicInstruction(OUT, Command.SET_FALSE), BasicInstruction(OUT, Command.SET_TRUE)]
    for j in range(1, k_aux + 1):
        cmds = [Command.GET]
        if allow_aux_set:
            cmds += [Command.SET_FALSE, Command.SET_TRUE]
        if allow_neg:
            cmds.append(Command.NEG)
        out += [BasicInstruction(aux(j), c) for c in cmds]
    return out


def build_alphabet(n_inputs: int, k_aux: int, max_jump: int, *,
                   allow_neg: bool = True, allow_aux_set: bool = True,
                   drop_jump0: bool = False, drop_jump1: bool = False,
                   drop_plain_input_get: bool = False,
                   extra: Iterable[BasicInstruction] = ()) -> Alphabet:
    """Every plain/test form of the legal basic instructions over
    ``in:1..n``, ``out``, ``aux:1..k``, the jumps ``#0..#max_jump`` and ``!``.

    ``extra`` adds basic instructions outside that register range (used to
    check that foreign registers never change a search verdict).
    """
    if max_jump < 0:
        raise ValueError("max_jump must be >= 0")
    symbols: list[Instruction] = []
    basics = basic_instructions(n_inputs, k_aux, allow_neg, allow_aux_set) + list(extra)
    for b in basics:
        for mode in (Plain, PosTest, NegTest):
            if (drop_plain_input_get and mode is Plain
                    and b.register.kind is RegKind.INPUT):
                continue
            symbols.append(mode(b))
    for l in range(max_jump + 1):
        if (l == 0 and drop_jump0) or (l == 1 and drop_jump1):
            continue
        symbols.append(Jump(l))
    symbols.append(HALT)
    symbols.sort(key=symbol_key)
    return Alphabet(tuple(symbols), n_inputs, k_aux, max_jump, allow_neg,
                    allow_aux_set, drop_jump0, drop_jump1, drop_plain_input_get)
