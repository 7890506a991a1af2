"""Numeric kernels shared by the chain and oracle modules.

Plain-Python sources wrapped by :func:`plic._backend.jit_kernel`; both
backends run the same code.  All masks are int64 bitmasks with message
``i`` on bit ``i - 1``; ``present`` is a uint8 flag array indexed by
mask; ``dtab[c]`` holds the 0-based decoding choice at present mask c.
"""

from __future__ import annotations

import numpy as np

from ._backend import jit_kernel

_INF = 1 << 30


def _skip_costs_impl(m, present, dtab, maximize, cost):
    # cost[c] = min (or max) number of skips on any completion of a
    # decoding chain whose current prefix set is c.  Supersets have
    # larger masks, so one descending pass suffices.
    full = (1 << m) - 1
    cost[full] = 0
    for c in range(full - 1, -1, -1):
        if present[c] != 0:
            cost[c] = cost[c | (1 << dtab[c])]
        else:
            if maximize:
                best = -1
            else:
                best = _INF
            for a in range(m):  # option 1: skip any message outside c
                bit = 1 << a
                if c & bit == 0:
                    v = cost[c | bit] + 1
                    if maximize:
                        if v > best:
                            best = v
                    elif v < best:
                        best = v
            if c != 0:  # option 2: mimic a present strict subset
                sub = (c - 1) & c
                while True:
                    if present[sub] != 0:
                        bit = 1 << dtab[sub]
                        if c & bit == 0:
                            v = cost[c | bit]
                            if maximize:
                                if v > best:
                                    best = v
                            elif v < best:
                                best = v
                    if sub == 0:
                        break
                    sub = (sub - 1) & c
            cost[c] = best
    return cost[0]


skip_costs = jit_kernel(_skip_costs_impl)


def _lstar_scan_impl(
    m, pres_masks, nchoices, choice_flat, choice_off, present, dtab, cost, witness
):
    # Enumerate every decoding choice in lexicographic order over the
    # canonical receiver order; keep the first maximizer of the minimum
    # skip count.  Returns that maximum.
    n = pres_masks.shape[0]
    idx = np.zeros(n, np.int64)
    for i in range(n):
        dtab[pres_masks[i]] = choice_flat[choice_off[i]]
    best = -1
    while True:
        v = skip_costs(m, present, dtab, False, cost)
        if v > best:
            best = v
            for i in range(n):
                witness[i] = dtab[pres_masks[i]]
        pos = n - 1
        while pos >= 0:
            if idx[pos] + 1 < nchoices[pos]:
                idx[pos] += 1
                dtab[pres_masks[pos]] = choice_flat[choice_off[pos] + idx[pos]]
                break
            idx[pos] = 0
            dtab[pres_masks[pos]] = choice_flat[choice_off[pos]]
            pos -= 1
        if pos < 0:
            break
    return best


lstar_scan = jit_kernel(_lstar_scan_impl)


def _gf2_insert_impl(lead, v, m):
    # Row-reduce v against the basis in `lead` (lead[b] = row with top
    # bit b, 0 if none); insert the residue.  Returns 1 if rank grew.
    for b in range(m - 1, -1, -1):
        if (v >> b) & 1 == 0:
            continue
        if lead[b] != 0:
            v ^= lead[b]
        else:
            lead[b] = v
            return 1
    return 0


gf2_insert = jit_kernel(_gf2_insert_impl)


def _gf2_member_impl(lead, v, m):
    for b in range(m - 1, -1, -1):
        if (v >> b) & 1 == 0:
            continue
        if lead[b] == 0:
            return 0
        v ^= lead[b]
    return 1


gf2_member = jit_kernel(_gf2_member_impl)


def _gf2_satisfaction_impl(m, bases, sat):
    # sat[s, h] = 1 iff receiver with side-information mask h can decode
    # some new message from code subspace s: e_j in span(rows + e_i, i in h)
    # for some j outside h.
    n_sub = bases.shape[0]
    ell = bases.shape[1]
    full = (1 << m) - 1
    lead = np.zeros(m, np.int64)
    for s in range(n_sub):
        for h in range(full):
            for b in range(m):
                lead[b] = 0
            for r in range(ell):
                gf2_insert(lead, bases[s, r], m)
            for j in range(m):
                if (h >> j) & 1:
                    gf2_insert(lead, 1 << j, m)
            ok = 0
            for j in range(m):
                if (h >> j) & 1 == 0:
                    if gf2_member(lead, 1 << j, m) == 1:
                        ok = 1
                        break
            sat[s, h] = ok


gf2_satisfaction = jit_kernel(_gf2_satisfaction_impl)


def _general_scan_impl(
    q, ell, digit, side, comp_flat, comp_off, table, seen_val, seen_stamp, out, counter
):
    # Enumerate all encoder tables F_q^m -> F_q^ell (encoded words as
    # integers below q^ell) in odometer order; return 1 on the first
    # table under which every receiver can decode some new message
    # deterministically, copying it to `out`.
    n_inputs = digit.shape[0]
    m = digit.shape[1]
    n_rec = comp_off.shape[0] - 1
    big_q = 1
    for _ in range(ell):
        big_q *= q
    side_span = 1
    for _ in range(m):
        side_span *= q
    for x in range(n_inputs):
        table[x] = 0
    stamp = 0
    while True:
        counter[0] += 1
        ok = 1
        for r in range(n_rec):
            satisfied = 0
            for t in range(comp_off[r], comp_off[r + 1]):
                j = comp_flat[t]
                stamp += 1
                deterministic = 1
                for x in range(n_inputs):
                    key = table[x] * side_span + side[x, r]
                    if seen_stamp[key] != stamp:
                        seen_stamp[key] = stamp
                        seen_val[key] = digit[x, j]
                    elif seen_val[key] != digit[x, j]:
                        deterministic = 0
                        break
                if deterministic == 1:
                    satisfied = 1
                    break
            if satisfied == 0:
                ok = 0
                break
        if ok == 1:
            for x in range(n_inputs):
                out[x] = table[x]
            return 1
        pos = n_inputs - 1
        while pos >= 0:
            if table[pos] + 1 < big_q:
                table[pos] += 1
                break
            table[pos] = 0
            pos -= 1
        if pos < 0:
            return 0


general_scan = jit_kernel(_general_scan_impl)


def warm_up() -> None:
    """Trigger compilation of every kernel on tiny inputs.

    Under the numba backend the first call pays the JIT cost; tests with
    wall-clock budgets call this once up front.
    """
    m = 2
    size = 1 << m
    present = np.ones(size, np.uint8)
    present[size - 1] = 0
    dtab = np.zeros(size, np.int64)
    dtab[0] = 0
    dtab[1] = 1
    dtab[2] = 0
    cost = np.zeros(size, np.int64)
    skip_costs(m, present, dtab, False, cost)
    skip_costs(m, present, dtab, True, cost)
    pres_masks = np.array([0, 1, 2], np.int64)
    choice_flat = np.array([0, 1, 1, 0], np.int64)
    choice_off = np.array([0, 2, 3, 4], np.int64)
    nchoices = np.array([2, 1, 1], np.int64)
    witness = np.zeros(3, np.int64)
    lstar_scan(
        m, pres_masks, nchoices, choice_flat, choice_off, present, dtab, cost, witness
    )
    bases = np.array([[1], [2]], np.int64)
    sat = np.zeros((2, size), np.uint8)
    gf2_satisfaction(m, bases, sat)
    q = 2
    n_inputs = q**m
    digit = np.zeros((n_inputs, m), np.int64)
    for x in range(n_inputs):
        for i in range(m):
            digit[x, i] = (x >> i) & 1
    side = np.zeros((n_inputs, 1), np.int64)
    comp_flat = np.array([0, 1], np.int64)
    comp_off = np.array([0, 2], np.int64)
    table = np.zeros(n_inputs, np.int64)
    span = q ** (1 + m)
    seen_val = np.zeros(span, np.int64)
    seen_stamp = np.zeros(span, np.int64)
    out = np.zeros(n_inputs, np.int64)
    counter = np.zeros(1, np.int64)
    general_scan(
        q, 1, digit, side, comp_flat, comp_off, table, seen_val, seen_stamp, out, counter
    )
