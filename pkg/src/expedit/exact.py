"""Exact eccentricities and expected distances via coalesced dynamic programming.

For a fixed string ``x`` of length ``n`` the DP columns of ``M(x, y)`` depend
only on the prefix of ``y`` read so far, and many prefixes share a column.
The column multiset ``C_j`` stores each distinct column once together with
the number of length-``j`` prefixes producing it; extending every column by
every symbol gives ``C_{j+1}``.  Columns are keyed by their delta vector
(entries in {-1, 0, +1}) packed two bits per delta into 64-bit words.

Symbols that do not occur in ``x`` produce identical successor columns, so
they are processed as a single symbol class carrying weight ``k - |alpha(x)|``.
This is what keeps large alphabets (k = 32 and beyond) tractable.

The expected distance ``e_k(n)`` is a weighted sum over orbits of the group
generated by string reversal and alphabet relabelling; orbits are enumerated
through restricted-growth strings (relabel-by-first-occurrence normal form).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .strings import ResourceGuardError, SymbolString

DEFAULT_MAX_STRINGS = 1 << 22
DEFAULT_MAX_COLUMNS = 1 << 22
DEFAULT_MAX_PATTERNS = 1 << 22


@dataclass(frozen=True)
class DPColumn:
    """Column ``j`` of the DP matrix as ``base`` plus per-row deltas."""

    base: int
    deltas: tuple[int, ...]

    def __post_init__(self):
        if any(d not in (-1, 0, 1) for d in self.deltas):
            raise ValueError("column deltas must lie in {-1, 0, +1}")

    @classmethod
    def from_values(cls, values: Sequence[int]) -> DPColumn:
        return cls(values[0], tuple(b - a for a, b in zip(values, values[1:])))

    @classmethod
    def initial(cls, n: int) -> DPColumn:
        return cls(0, (1,) * n)

    @property
    def values(self) -> tuple[int, ...]:
        out = [self.base]
        for d in self.deltas:
            out.append(out[-1] + d)
        return tuple(out)

    @property
    def last(self) -> int:
        return self.base + sum(self.deltas)


@dataclass(frozen=True)
class ColumnMultiset:
    """Distinct columns of ``C_j`` with their multiplicities."""

    j: int
    columns: np.ndarray          # shape (m, n+1), column values
    multiplicities: np.ndarray   # shape (m,), int64 or Python-int objects

    @property
    def entries(self) -> dict[tuple[int, ...], int]:
        deltas = np.diff(self.columns, axis=1)
        return {tuple(int(v) for v in row): int(mu) for row, mu in zip(deltas, self.multiplicities)}

    @property
    def total(self) -> int:
        return sum(int(mu) for mu in self.multiplicities)

    def __len__(self) -> int:
        return len(self.multiplicities)


@dataclass(frozen=True)
class EquivalenceClass:
    representative: SymbolString
    size: int


# -- single-column transition -------------------------------------------------

def next_column(x: SymbolString, col: DPColumn, j: int, b: int) -> DPColumn:
    """Column ``j`` of ``M(x, y)`` given column ``j-1`` and ``y[j] = b``."""
    n = len(x)
    if len(col.deltas) != n:
        raise ValueError("column length does not match x")
    if not 1 <= j:
        raise ValueError("column index must be >= 1")
    if not 0 <= b < x.k:
        raise ValueError(f"symbol {b} outside alphabet of size {x.k}")
    prev = col.values
    cur = [j]
    for i in range(1, n + 1):
        cur.append(min(prev[i - 1] + (x[i - 1] != b), prev[i] + 1, cur[i - 1] + 1))
    return DPColumn.from_values(cur)


# -- brute-force eccentricity -------------------------------------------------

def all_strings(k: int, n: int) -> np.ndarray:
    """Every string of ``Sigma_k^n`` as rows of an int array, lexicographic."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(k ** n, dtype=np.int64)
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % k


def distances_to_all(x: Sequence[int], ys: np.ndarray) -> np.ndarray:
    """Edit distance from ``x`` to every row of ``ys`` (batched textbook DP)."""
    n, m = len(x), ys.shape[1]
    batch = ys.shape[0]
    prev = [np.full(batch, j, dtype=np.int64) for j in range(m + 1)]
    for i in range(1, n + 1):
        cur = [np.full(batch, i, dtype=np.int64)]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ys[:, j - 1] != x[i - 1])
            cur.append(np.minimum(np.minimum(sub, prev[j] + 1), cur[j - 1] + 1))
        prev = cur
    return prev[m]


def eccentricity_naive(x: SymbolString, max_strings: int = DEFAULT_MAX_STRINGS) -> Fraction:
    """``k^-n * sum_y d(x, y)`` by enumerating every ``y``."""
    n, k = len(x), x.k
    if k ** n > max_strings:
        raise ResourceGuardError(f"k^n = {k}^{n} exceeds max_strings = {max_strings}")
    d = distances_to_all(x.symbols, all_strings(k, n))
    return Fraction(int(d.sum()), k ** n)


# -- coalesced DP -------------------------------------------------------------

def _symbol_classes(x: SymbolString) -> list[tuple[int, int]]:
    """(symbol, weight) pairs; absent symbols collapse into one class."""
    present = sorted(set(x.symbols))
    classes = [(b, 1) for b in present]
    absent = x.k - len(present)
    if absent:
        # Any symbol not in x acts identically; pick a concrete one.
        used = set(present)
        b = next(s for s in range(x.k) if s not in used)
        classes.append((b, absent))
    return classes


def _pack_keys(cols: np.ndarray) -> np.ndarray:
    """Two bits per delta, 32 deltas per uint64 word."""
    deltas = (np.diff(cols, axis=1) + 1).astype(np.uint64)
    n = deltas.shape[1]
    words = max(1, -(-n // 32))
    keys = np.zeros((cols.shape[0], words), dtype=np.uint64)
    for i in range(n):
        keys[:, i // 32] |= deltas[:, i] << np.uint64(2 * (i % 32))
    return keys


def _coalesce(cols: np.ndarray, mult: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = _pack_keys(cols)
    if keys.shape[1] == 1:
        _, first, inv = np.unique(keys[:, 0], return_index=True, return_inverse=True)
    else:
        _, first, inv = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inv = inv.reshape(-1)
    merged = np.zeros(len(first), dtype=mult.dtype)
    np.add.at(merged, inv, mult)
    return cols[first], merged


def column_multisets(x: SymbolString, max_columns: int = DEFAULT_MAX_COLUMNS) -> Iterator[ColumnMultiset]:
    """Yield ``C_0, C_1, ..., C_n`` for the string ``x``."""
    n, k = len(x), x.k
    xs = np.asarray(x.symbols, dtype=np.int64)
    # Multiplicities are bounded by the total mass k^j <= k^n.
    dtype = np.int64 if k ** n < (1 << 62) else object
    cols = np.arange(n + 1, dtype=np.int32)[None, :]
    mult = np.ones(1, dtype=dtype)
    yield ColumnMultiset(0, cols, mult)
    classes = _symbol_classes(x)
    for j in range(1, n + 1):
        blocks, weights = [], []
        for b, w in classes:
            xi = (xs != b).astype(np.int32)
            new = np.empty_like(cols)
            new[:, 0] = j
            for i in range(1, n + 1):
                v = np.minimum(cols[:, i - 1] + xi[i - 1], cols[:, i] + 1)
                np.minimum(v, new[:, i - 1] + 1, out=new[:, i])
            blocks.append(new)
            weights.append(mult * w if w != 1 else mult)
        cols, mult = _coalesce(np.concatenate(blocks), np.concatenate(weights))
        if len(mult) > max_columns:
            raise ResourceGuardError(f"{len(mult)} distinct columns exceed max_columns = {max_columns}")
        yield ColumnMultiset(j, cols, mult)


def eccentricity_cdp(x: SymbolString, max_columns: int = DEFAULT_MAX_COLUMNS) -> Fraction:
    n = len(x)
    if n == 0:
        return Fraction(0)
    for cm in column_multisets(x, max_columns):
        pass
    total = sum(int(mu) * int(c) for mu, c in zip(cm.multiplicities, cm.columns[:, n]))
    return Fraction(total, x.k ** n)


def eccentricity_weighted(x: SymbolString, dists: Sequence[Sequence]) -> Fraction:
    """Expected distance from ``x`` to ``y`` with ``y[j] ~ dists[j]`` independently.

    Each row of ``dists`` is a length-k probability vector given as exact
    rationals (ints, Fractions, or decimal strings); rows must sum to 1.
    """
    n, k = len(x), x.k
    if len(dists) != n:
        raise ValueError(f"need {n} distribution rows, got {len(dists)}")
    rows = []
    for j, row in enumerate(dists):
        if len(row) != k:
            raise ValueError(f"row {j} has {len(row)} entries, expected {k}")
        probs = [Fraction(p) for p in row]
        if any(p < 0 for p in probs) or sum(probs) != 1:
            raise ValueError(f"row {j} is not a probability vector")
        rows.append(probs)
    layer = {DPColumn.initial(n): Fraction(1)}
    for j in range(1, n + 1):
        nxt: dict[DPColumn, Fraction] = {}
        for col, p in layer.items():
            for b, q in enumerate(rows[j - 1]):
                if q:
                    c = next_column(x, col, j, b)
                    nxt[c] = nxt.get(c, 0) + p * q
        layer = nxt
    return sum((p * col.last for col, p in layer.items()), Fraction(0))


# -- symmetry reduction ---------------------------------------------------------

def _relabel(symbols: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(s, len(seen)) for s in symbols)


def canonicalize(x: SymbolString) -> SymbolString:
    """Lexicographically least relabelled form of ``x`` or its reverse."""
    return SymbolString(x.k, min(_relabel(x.symbols), _relabel(x.symbols[::-1])))


def _falling(k: int, m: int) -> int:
    return math.perm(k, m)


def orbit_size(x: SymbolString) -> int:
    """Size of the orbit of ``x`` under reversal and alphabet permutations."""
    p = _relabel(x.symbols)
    used = len(set(p))
    fixed_by_reversal = _relabel(x.symbols[::-1]) == p
    return _falling(x.k, used) * (1 if fixed_by_reversal else 2)


def _stirling2_row(n: int) -> list[int]:
    row = [1] + [0] * n  # S(0, m)
    for i in range(1, n + 1):
        new = [0] * (n + 1)
        for m in range(1, i + 1):
            new[m] = m * row[m] + row[m - 1]
        row = new
    return row


def pattern_count(k: int, n: int) -> int:
    """Number of restricted-growth strings of length n using at most k symbols."""
    return sum(_stirling2_row(n)[: min(k, n) + 1])


def _restricted_growth(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    p = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(p)
            return
        for s in range(min(top + 2, k)):
            p[i] = s
            yield from rec(i + 1, max(top, s))

    p[0] = 0
    yield from rec(1, 0)


def enumerate_classes(k: int, n: int, max_patterns: int = DEFAULT_MAX_PATTERNS) -> Iterator[EquivalenceClass]:
    """Each orbit of ``Sigma_k^n`` once, with its exact size."""
    count = pattern_count(k, n)
    if count > max_patterns:
        raise ResourceGuardError(f"{count} patterns exceed max_patterns = {max_patterns}")
    for p in _restricted_growth(n, k):
        r = _relabel(p[::-1])
        if r < p:
            continue
        size = _falling(k, len(set(p))) * (1 if r == p else 2)
        yield EquivalenceClass(SymbolString(k, p), size)


def _weighted_ecc(args) -> Fraction:
    cls, max_columns = args
    return cls.size * eccentricity_cdp(cls.representative, max_columns)


def expected_distance_exact(
    k: int,
    n: int,
    workers: int = 1,
    max_columns: int = DEFAULT_MAX_COLUMNS,
    max_patterns: int = DEFAULT_MAX_PATTERNS,
) -> tuple[Fraction, Fraction]:
    """Exact ``(e_k(n), alpha_k(n))`` as rationals."""
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    jobs = [(c, max_columns) for c in enumerate_classes(k, n, max_patterns)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_weighted_ecc, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        parts = [_weighted_ecc(job) for job in jobs]
    e = sum(parts, Fraction(0)) / k ** n
    return e, e / n


def expected_distance_bruteforce(k: int, n: int, max_strings: int = DEFAULT_MAX_STRINGS) -> Fraction:
    """``e_k(n)`` straight from the definition: average over all k^(2n) pairs."""
    if k ** n > max_strings:
        raise ResourceGuardError(f"k^n = {k}^{n} exceeds max_strings = {max_strings}")
    ys = all_strings(k, n)
    total = sum(int(distances_to_all(x, ys).sum()) for x in ys)
    return Fraction(total, k ** (2 * n))
