"""Execution of instruction sequences over Boolean registers.

Two interpreters share one contract.  ``step``/``execute_reference`` is the
literal reading of the instruction effects and allocates a fresh state per
step.  ``execute`` runs a flat encoding of the program with the register
file packed into one integer; the search engines use the same encoding.

Positions are 1-based.  Control only moves forward, so an execution takes
at most ``psize(X)`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Union

from .isa import (
    BasicForm, BasicInstruction, Command, Halt, Instruction, InstructionSequence,
    Jump, NegTest, Plain, PosTest, Register, RegKind,
)


@dataclass(frozen=True)
class Environment:
    inputs: tuple[bool, ...]
    output: bool = False
    auxiliaries: tuple[bool, ...] = ()

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def k(self) -> int:
        return len(self.auxiliaries)


def fresh_environment(inputs, k: int = 0) -> Environment:
    """Start state of the computes relation: out and every aux register false."""
    return Environment(tuple(bool(b) for b in inputs), False, (False,) * k)


def inputs_from_index(index: int, n: int) -> tuple[bool, ...]:
    """Input vector for a truth-table index; b1 is the least significant bit."""
    return tuple(bool(index >> j & 1) for j in range(n))


@dataclass(frozen=True)
class MachineState:
    env: Environment
    pc: int = 1


@dataclass(frozen=True)
class Terminated:
    env: Environment

    @property
    def output(self) -> bool:
        return self.env.output


@dataclass(frozen=True)
class Inaction:
    position: int


@dataclass(frozen=True)
class InvalidAccess:
    position: int
    register: Register


Outcome = Union[Terminated, Inaction, InvalidAccess]


# -- reference interpreter --------------------------------------------------

def _read(env: Environment, reg: Register) -> bool:
    if reg.kind is RegKind.INPUT:
        return env.inputs[reg.index - 1]
    if reg.kind is RegKind.OUTPUT:
        return env.output
    return env.auxiliaries[reg.index - 1]


def _write(env: Environment, reg: Register, value: bool) -> Environment:
    if reg.kind is RegKind.OUTPUT:
        return replace(env, output=value)
    auxs = list(env.auxiliaries)
    auxs[reg.index - 1] = value
    return replace(env, auxiliaries=tuple(auxs))


def _present(env: Environment, reg: Register) -> bool:
    if reg.kind is RegKind.INPUT:
        return reg.index <= env.n
    if reg.kind is RegKind.AUX:
        return reg.index <= env.k
    return True


def apply_basic(env: Environment, b: BasicInstruction) -> tuple[Environment, bool]:
    """Effect of a basic instruction: (new environment, reply)."""
    cmd = b.command
    if cmd is Command.GET:
        return env, _read(env, b.register)
    if cmd is Command.SET_FALSE:
        return _write(env, b.register, False), False
    if cmd is Command.SET_TRUE:
        return _write(env, b.register, True), True
    value = not _read(env, b.register)
    return _write(env, b.register, value), value


def step(state: MachineState, x: InstructionSequence) -> MachineState | Outcome:
    pc = state.pc
    ins = x.at(pc)
    if isinstance(ins, Halt):
        return Terminated(state.env)
    if isinstance(ins, Jump):
        if ins.offset == 0:
            return Inaction(pc)
        nxt = pc + ins.offset
        env = state.env
    else:
        if not _present(state.env, ins.basic.register):
            return InvalidAccess(pc, ins.basic.register)
        env, reply = apply_basic(state.env, ins.basic)
        if isinstance(ins, PosTest):
            nxt = pc + 1 if reply else pc + 2
        elif isinstance(ins, NegTest):
            nxt = pc + 2 if reply else pc + 1
        else:
            nxt = pc + 1
    if nxt > len(x):
        return Inaction(nxt)
    return MachineState(env, nxt)


def execute_reference(x: InstructionSequence, env: Environment) -> Outcome:
    state: MachineState | Outcome = MachineState(env, 1)
    while isinstance(state, MachineState):
        state = step(state, x)
    return state


@dataclass(frozen=True)
class TraceEntry:
    position: int
    instruction: Instruction
    reply: bool | None


@dataclass(frozen=True)
class Trace:
    entries: tuple[TraceEntry, ...]
    outcome: Outcome

    @property
    def positions(self) -> list[int]:
        return [e.position for e in self.entries]


def trace(x: InstructionSequence, env: Environment) -> Trace:
    """Execute with a visit log; the entry for the instruction that produced
    the outcome is included (unless the outcome is running past the end)."""
    entries = []
    state: MachineState | Outcome = MachineState(env, 1)
    while isinstance(state, MachineState):
        ins = x.at(state.pc)
        reply = None
        if isinstance(ins, BasicForm) and _present(state.env, ins.basic.register):
            reply = apply_basic(state.env, ins.basic)[1]
        entries.append(TraceEntry(state.pc, ins, reply))
        state = step(state, x)
    return Trace(tuple(entries), state)


# -- flat encoding ----------------------------------------------------------
#
# Register file as an int: bit 0 is out, bits 1..n the inputs, bits n+1..n+k
# the auxiliaries.  A register outside that range gets slot -1.

K_PLAIN, K_POS, K_NEG, K_JUMP, K_HALT = range(5)
C_GET, C_SETF, C_SETT, C_NEG = range(4)

_KIND_CODE = {Plain: K_PLAIN, PosTest: K_POS, NegTest: K_NEG}
_CMD_CODE = {Command.GET: C_GET, Command.SET_FALSE: C_SETF,
             Command.SET_TRUE: C_SETT, Command.NEG: C_NEG}


def register_slot(reg: Register, n: int, k: int) -> int:
    if reg.kind is RegKind.OUTPUT:
        return 0
    if reg.kind is RegKind.INPUT:
        return reg.index if reg.index <= n else -1
    return n + reg.index if reg.index <= k else -1


def encode_instruction(ins: Instruction, n: int, k: int) -> tuple[int, int, int, int]:
    """(kind, slot, command, jump offset)."""
    if isinstance(ins, Halt):
        return (K_HALT, 0, 0, 0)
    if isinstance(ins, Jump):
        return (K_JUMP, 0, 0, ins.offset)
    return (_KIND_CODE[type(ins)], register_slot(ins.basic.register, n, k),
            _CMD_CODE[ins.basic.command], 0)


@lru_cache(maxsize=4096)
def compile_program(x: InstructionSequence, n: int, k: int) -> tuple:
    return tuple(encode_instruction(ins, n, k) for ins in x.items)


def pack_registers(env: Environment) -> int:
    regs = int(env.output)
    for i, b in enumerate(env.inputs):
        regs |= int(b) << (i + 1)
    for j, b in enumerate(env.auxiliaries):
        regs |= int(b) << (env.n + 1 + j)
    return regs


def unpack_registers(regs: int, n: int, k: int) -> Environment:
    return Environment(tuple(bool(regs >> (i + 1) & 1) for i in range(n)),
                       bool(regs & 1),
                       tuple(bool(regs >> (n + 1 + j) & 1) for j in range(k)))


def run_compiled(code: tuple, regs: int) -> tuple[int, int, int]:
    """Run an encoded program from position 1.

    Returns ``(status, regs, position)`` with status 0 = terminated,
    1 = inaction, 2 = invalid access.
    """
    size = len(code)
    pc = 0
    while True:
        kind, slot, cmd, arg = code[pc]
        if kind == K_HALT:
            return 0, regs, pc + 1
        if kind == K_JUMP:
            if arg == 0:
                return 1, regs, pc + 1
            pc += arg
        else:
            if slot < 0:
                return 2, regs, pc + 1
            bit = 1 << slot
            if cmd == C_GET:
                reply = regs & bit
            elif cmd == C_SETF:
                regs &= ~bit
                reply = 0
            elif cmd == C_SETT:
                regs |= bit
                reply = 1
            else:
                regs ^= bit
                reply = regs & bit
            if kind == K_PLAIN or (kind == K_POS) == bool(reply):
                pc += 1
            else:
                pc += 2
        if pc >= size:
            return 1, regs, pc + 1


def execute(x: InstructionSequence, env: Environment) -> Outcome:
    n, k = env.n, env.k
    status, regs, pos = run_compiled(compile_program(x, n, k), pack_registers(env))
    if status == 0:
        return Terminated(unpack_registers(regs, n, k))
    if status == 1:
        return Inaction(pos)
    return InvalidAccess(pos, x.at(pos).basic.register)
