"""Compiled depth-first enumeration of fixed-length programs.

Every candidate over the per-position symbol lists is visited in
lexicographic order.  The 2^n executions are advanced incrementally: the
state after position d is shared by every candidate with the same first d
symbols, which is what makes full enumeration affordable.

Execution state per input vector: ``pc >= 0`` pending at that position,
``DONE`` terminated with the expected output, ``FAIL`` anything else.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..machine import C_GET, C_SETF, C_SETT, K_HALT, K_JUMP, K_PLAIN, K_POS

DONE = -1
FAIL = -2


@njit(cache=True)
def scan(kind, slot, cmd, arg, syms, counts, length, regs0, target, prefix,
         stop_at_first, abandon, budget):
    """Returns (leaves, computing, found, witness, steps, aborted)."""
    n_exec = regs0.shape[0]
    pcs = np.empty((length + 1, n_exec), np.int64)
    rgs = np.empty((length + 1, n_exec), np.int64)
    nfail = np.zeros(length + 1, np.int64)
    ptr = np.zeros(length + 1, np.int64)
    chosen = np.zeros(length, np.int64)
    witness = np.full(length, -1, np.int64)
    leaves = 0
    computing = 0
    steps = 0
    found = False
    aborted = False

    for j in range(n_exec):
        pcs[0, j] = 0
        rgs[0, j] = regs0[j]

    start = prefix.shape[0]
    d = 0
    while True:
        if d < start:
            s = prefix[d]
        elif d == length:
            leaves += 1
            if nfail[length] == 0:
                computing += 1
                if not found:
                    found = True
                    for q in range(length):
                        witness[q] = chosen[q]
                    if stop_at_first:
                        break
            d -= 1
            if d < start:
                break
            continue
        else:
            if ptr[d] >= counts[d] or (abandon and nfail[d] > 0):
                d -= 1
                if d < start:
                    break
                continue
            s = syms[d, ptr[d]]
            ptr[d] += 1

        chosen[d] = s
        fails = nfail[d]
        k = kind[s]
        for j in range(n_exec):
            pc = pcs[d, j]
            r = rgs[d, j]
            if pc == d:
                steps += 1
                if k == K_HALT:
                    if (r & 1) == target[j]:
                        pc = DONE
                    else:
                        pc = FAIL
                elif k == K_JUMP:
                    if arg[s] == 0:
                        pc = FAIL
                    else:
                        pc = d + arg[s]
                elif slot[s] < 0:
                    pc = FAIL
                else:
                    bit = np.int64(1) << slot[s]
                    c = cmd[s]
                    if c == C_GET:
                        reply = (r & bit) != 0
                    elif c == C_SETF:
                        r &= ~bit
                        reply = False
                    elif c == C_SETT:
                        r |= bit
                        reply = True
                    else:
                        r ^= bit
                        reply = (r & bit) != 0
                    if k == K_PLAIN or (k == K_POS) == reply:
                        pc = d + 1
                    else:
                        pc = d + 2
                if pc >= length:
                    pc = FAIL
                if pc == FAIL:
                    fails += 1
            pcs[d + 1, j] = pc
            rgs[d + 1, j] = r
        nfail[d + 1] = fails
        d += 1
        if d < length:
            ptr[d] = 0
        if steps > budget:
            aborted = True
            break

    return leaves, computing, found, witness, steps, aborted


def symbol_arrays(codes):
    """Split (kind, slot, cmd, arg) tuples into int64 arrays."""
    a = np.asarray(codes, dtype=np.int64).reshape(-1, 4)
    return a[:, 0].copy(), a[:, 1].copy(), a[:, 2].copy(), a[:, 3].copy()


def allowed_arrays(allowed):
    """Per-position symbol index lists -> (padded 2D array, counts)."""
    length = len(allowed)
    width = max((len(a) for a in allowed), default=1) or 1
    syms = np.zeros((length, width), np.int64)
    counts = np.zeros(length, np.int64)
    for d, a in enumerate(allowed):
        syms[d, :len(a)] = a
        counts[d] = len(a)
    return syms, counts
