"""Exact counting over execution frontiers.

After fixing the first d symbols, everything that matters for the rest of a
candidate is its frontier: for each input vector, either "terminated with
the right output" or the pending position (relative to d) together with
the register file.  A frontier in which some execution has already failed
has no computing completion, and equal frontiers at equal remaining length
have equal completion counts, so the count is a memoised recursion over
frontiers.  The result is the exact number of computing candidates.
"""

from __future__ import annotations

from ..machine import C_GET, C_SETF, C_SETT, K_HALT, K_JUMP, K_PLAIN, K_POS

DONE = -1


class BudgetExceeded(Exception):
    def __init__(self, steps: int):
        super().__init__(f"step budget exceeded after {steps} steps")
        self.steps = steps


class FrontierCounter:
    """Counts computing completions for one target, length and symbol set.

    ``codes[s]`` is the (kind, slot, cmd, arg) encoding of symbol s and
    ``allowed[d]`` lists the symbols admitted at 0-based position d.
    """

    def __init__(self, codes, allowed, length: int, targets, regs0,
                 n_regs: int, budget: int):
        self.codes = codes
        self.allowed = allowed
        self.length = length
        self.targets = tuple(targets)
        self.regs0 = tuple(regs0)
        self.stride = 1 << n_regs
        self.budget = budget
        self.steps = 0
        self.leaves = 0
        self.memo: dict = {}

    def root(self) -> tuple:
        return self.regs0  # every execution pending at relative position 0

    def advance(self, frontier: tuple, s: int, r: int):
        """Frontier after placing symbol s with r positions left (including
        this one); None when some execution fails."""
        kind, slot, cmd, arg = self.codes[s]
        stride = self.stride
        out = []
        for j, st in enumerate(frontier):
            if st == DONE:
                out.append(DONE)
                continue
            if st >= stride:
                out.append(st - stride)
                continue
            self.steps += 1
            regs = st
            if kind == K_HALT:
                if (regs & 1) != self.targets[j]:
                    return None
                out.append(DONE)
                continue
            if kind == K_JUMP:
                if arg == 0:
                    return None
                delta = arg
            else:
                if slot < 0:
                    return None
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
                delta = 1 if kind == K_PLAIN or (kind == K_POS) == bool(reply) else 2
            if delta > r - 1:
                return None  # lands at or past the end
            out.append((delta - 1) * stride + regs)
        if self.steps > self.budget:
            raise BudgetExceeded(self.steps)
        return tuple(out)

    def count(self, frontier: tuple, r: int) -> int:
        if r == 0:
            self.leaves += 1
            return 1
        key = (r, frontier)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for s in self.allowed[self.length - r]:
            child = self.advance(frontier, s, r)
            if child is not None:
                total += self.count(child, r - 1)
        self.memo[key] = total
        return total

    def apply_prefix(self, prefix) -> tuple | None:
        frontier = self.root()
        r = self.length
        for s in prefix:
            frontier = self.advance(frontier, s, r)
            if frontier is None:
                return None
            r -= 1
        return frontier

    def smallest_completion(self, prefix) -> tuple | None:
        """Lexicographically smallest computing extension of ``prefix``."""
        frontier = self.apply_prefix(prefix)
        if frontier is None:
            return None
        r = self.length - len(prefix)
        if self.count(frontier, r) == 0:
            return None
        chosen = list(prefix)
        while r:
            for s in self.allowed[self.length - r]:
                child = self.advance(frontier, s, r)
                if child is not None and self.count(child, r - 1):
                    chosen.append(s)
                    frontier = child
                    break
            r -= 1
        return tuple(chosen)
