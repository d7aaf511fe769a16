"""Compiled inner loops for exhaustive word-map enumeration."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def value_histogram(table, inv, code, prefix_len, domains, lo, hi):
    """Histogram of the word value over the product of ``domains``.

    ``code[t] = 2 * variable + (1 if inverted else 0)`` for letter ``t``
    (0-based variables).  The first ``prefix_len`` letters must not involve
    the last variable; their product is reused across the innermost loop.
    Only tuples whose first coordinate index lies in ``[lo, hi)`` are visited.
    """
    n = table.shape[0]
    d, m = domains.shape
    out = np.zeros(n, dtype=np.int64)
    L = code.shape[0]
    if d == 0:
        if lo == 0 and hi > 0:
            out[0] = 1
        return out
    idx = np.zeros(d, dtype=np.int64)
    vals = np.zeros(2 * d, dtype=np.int64)
    last = d - 1
    for first in range(lo, hi):
        idx[:] = 0
        idx[0] = first
        for k in range(d):
            x = domains[k, idx[k]]
            vals[2 * k] = x
            vals[2 * k + 1] = inv[x]
        while True:
            # outer variables fixed: prefix product, then sweep the last variable
            pre = 0
            for t in range(prefix_len):
                pre = table[pre, vals[code[t]]]
            lo_inner = idx[last] if last == 0 else 0
            hi_inner = lo_inner + 1 if last == 0 else m
            for i in range(lo_inner, hi_inner):
                x = domains[last, i]
                vals[2 * last] = x
                vals[2 * last + 1] = inv[x]
                acc = pre
                for t in range(prefix_len, L):
                    acc = table[acc, vals[code[t]]]
                out[acc] += 1
            if last == 0:
                break
            j = last - 1
            while j >= 1:
                idx[j] += 1
                if idx[j] < m:
                    x = domains[j, idx[j]]
                    vals[2 * j] = x
                    vals[2 * j + 1] = inv[x]
                    break
                idx[j] = 0
                x = domains[j, 0]
                vals[2 * j] = x
                vals[2 * j + 1] = inv[x]
                j -= 1
            if j < 1:
                break
    return out


@njit(cache=True, nogil=True)
def _word_value(table, inv, code, args):
    acc = 0
    for t in range(code.shape[0]):
        c = code[t]
        x = args[c >> 1]
        if c & 1:
            x = inv[x]
        acc = table[acc, x]
    return acc


@njit(cache=True, nogil=True)
def coset_identity_mask(table, inv, code, d, reps, basis):
    """Flag tuples ``r`` in ``reps^d`` with ``w(.., b r_i, ..) == w(r)`` for every
    basis element ``b`` and position ``i``.

    The tuple with mixed-radix digits ``(k_1, ..., k_d)`` (most significant
    first) sits at position ``sum k_i m^(d-i)``.
    """
    m = reps.shape[0]
    total = m ** d
    out = np.zeros(total, dtype=np.uint8)
    args = np.zeros(max(d, 1), dtype=np.int64)
    for pos in range(total):
        rest = pos
        for i in range(d - 1, -1, -1):
            args[i] = reps[rest % m]
            rest //= m
        base = _word_value(table, inv, code, args)
        ok = True
        for i in range(d):
            keep = args[i]
            for b in basis:
                args[i] = table[b, keep]
                if _word_value(table, inv, code, args) != base:
                    ok = False
                    break
            args[i] = keep
            if not ok:
                break
        if ok:
            out[pos] = 1
    return out
