"""Unit-cost edit distance kernels.

Three interchangeable kernels compute the same Levenshtein distance:

* :func:`edit_distance` fills the full ``(|x|+1) x (|y|+1)`` matrix;
* :func:`edit_distance_lowmem` keeps a single numpy row of length
  ``min(|x|, |y|) + 1``;
* :func:`edit_distance_bitparallel` is Myers' bit-vector algorithm, with
  Python integers acting as arbitrary-width words.

The bit-parallel kernel can be switched off globally by setting the
environment variable ``EXPEDIT_DISABLE_BITPARALLEL=1``; :func:`default_kernel`
then hands out the low-memory kernel instead.
"""
from __future__ import annotations

import os
from typing import Callable, Sequence

import numpy as np

from .strings import SymbolString, check_same_alphabet

Kernel = Callable[[SymbolString, SymbolString], int]


def edit_distance(x: SymbolString, y: SymbolString) -> int:
    check_same_alphabet(x, y)
    return _dp_full(x.symbols, y.symbols)


def edit_distance_lowmem(x: SymbolString, y: SymbolString) -> int:
    check_same_alphabet(x, y)
    return _dp_row(x.symbols, y.symbols)


def edit_distance_bitparallel(x: SymbolString, y: SymbolString) -> int:
    check_same_alphabet(x, y)
    return _myers(x.symbols, y.symbols)


def hamming_distance(x: SymbolString, y: SymbolString) -> int:
    check_same_alphabet(x, y)
    if len(x) != len(y):
        raise ValueError(f"Hamming distance needs equal lengths, got {len(x)} and {len(y)}")
    return sum(a != b for a, b in zip(x.symbols, y.symbols))


def bitparallel_enabled() -> bool:
    return os.environ.get("EXPEDIT_DISABLE_BITPARALLEL", "") not in ("1", "true", "yes")


def default_kernel() -> Kernel:
    return edit_distance_bitparallel if bitparallel_enabled() else edit_distance_lowmem


def raw_kernel(kernel: Kernel | None = None) -> Callable[[Sequence[int], Sequence[int]], int]:
    """Map a public kernel to its unchecked counterpart on plain sequences."""
    kernel = kernel or default_kernel()
    return _RAW[kernel]


# -- unchecked implementations on plain symbol sequences ---------------------

def _dp_full(x: Sequence[int], y: Sequence[int]) -> int:
    n, m = len(x), len(y)
    M = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        M[i][0] = i
    for j in range(m + 1):
        M[0][j] = j
    for i in range(1, n + 1):
        xi = x[i - 1]
        prev, cur = M[i - 1], M[i]
        for j in range(1, m + 1):
            cur[j] = min(prev[j - 1] + (xi != y[j - 1]), prev[j] + 1, cur[j - 1] + 1)
    return M[n][m]


def _dp_row(x: Sequence[int], y: Sequence[int]) -> int:
    # The row runs along the shorter string; d(x, y) = d(y, x).
    if len(y) > len(x):
        x, y = y, x
    m = len(y)
    if m == 0:
        return len(x)
    ys = np.asarray(y, dtype=np.int64)
    ramp = np.arange(m + 1, dtype=np.int64)
    row = ramp.copy()
    cand = np.empty(m + 1, dtype=np.int64)
    for i, xi in enumerate(x, start=1):
        cand[0] = i
        np.minimum(row[:-1] + (ys != xi), row[1:] + 1, out=cand[1:])
        # Horizontal dependency row[j] <= row[j-1] + 1 is a running minimum
        # of (cand - j), shifted back by j.
        cand -= ramp
        np.minimum.accumulate(cand, out=row)
        row += ramp
    return int(row[m])


def _myers(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) < len(y):
        x, y = y, x
    m = len(y)
    if m == 0:
        return len(x)
    # y is the pattern (bit i <-> y[i]); x is scanned column by column.
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    peq: dict[int, int] = {}
    for i, c in enumerate(y):
        peq[c] = peq.get(c, 0) | (1 << i)
    pv, mv, score = mask, 0, m
    for c in x:
        eq = peq.get(c, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        # Shifting a 1 into ph encodes the +1 steps of the top boundary row.
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = mh | (~(xv | ph) & mask)
        mv = ph & xv
    return score


_RAW = {
    edit_distance: _dp_full,
    edit_distance_lowmem: _dp_row,
    edit_distance_bitparallel: _myers,
}
