import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expedit import (
    AlphabetMismatchError,
    SymbolString,
    edit_distance,
    edit_distance_bitparallel,
    edit_distance_lowmem,
    hamming_distance,
)
from expedit.distance import default_kernel, raw_kernel
from expedit.exact import all_strings, distances_to_all

from oracles import bfs_distance

KERNELS = [edit_distance, edit_distance_lowmem, edit_distance_bitparallel]


def S(text, k=3):
    return SymbolString.from_text(text, k)


@pytest.mark.parametrize("dist", KERNELS)
@pytest.mark.parametrize(
    "x,y,expected",
    [("", "abc", 3), ("abc", "abc", 0), ("aa", "", 2), ("", "", 0), ("abc", "", 3)],
)
def test_base_cases(dist, x, y, expected):
    assert dist(S(x), S(y)) == expected


@pytest.mark.parametrize("dist", KERNELS)
def test_aba_bab(dist):
    x, y = S("aba", 2), S("bab", 2)
    assert dist(x, y) == 2
    assert bfs_distance(x.symbols, y.symbols, 2) == 2


def test_bitparallel_across_word_seams():
    rng = random.Random(5)
    x = SymbolString(4, tuple(rng.randrange(4) for _ in range(64 * 3 + 5)))
    assert edit_distance_bitparallel(x, x) == 0
    y = SymbolString(4, x.symbols[:100] + ((x[100] + 1) % 4,) + x.symbols[101:])
    assert edit_distance_bitparallel(x, y) == 1


@pytest.mark.parametrize("dist", KERNELS)
def test_alphabet_mismatch(dist):
    with pytest.raises(AlphabetMismatchError):
        dist(S("ab", 2), S("ab", 3))


def test_small_pairs_match_bfs_oracle():
    rng = random.Random(11)
    for _ in range(150):
        k = rng.choice([2, 3])
        x = tuple(rng.randrange(k) for _ in range(rng.randint(0, 5)))
        y = tuple(rng.randrange(k) for _ in range(rng.randint(0, 5)))
        want = bfs_distance(x, y, k)
        for dist in KERNELS:
            assert dist(SymbolString(k, x), SymbolString(k, y)) == want


def test_randomized_differential():
    rng = random.Random(2024)
    for _ in range(1000):
        k = rng.choice([2, 4, 20])
        x = SymbolString(k, tuple(rng.randrange(k) for _ in range(rng.randint(0, 300))))
        y = SymbolString(k, tuple(rng.randrange(k) for _ in range(rng.randint(0, 300))))
        d = edit_distance_lowmem(x, y)
        assert edit_distance_bitparallel(x, y) == d
    # The full-matrix kernel is slow in pure Python; check a subset.
    for _ in range(60):
        k = rng.choice([2, 4, 20])
        x = SymbolString(k, tuple(rng.randrange(k) for _ in range(rng.randint(0, 300))))
        y = SymbolString(k, tuple(rng.randrange(k) for _ in range(rng.randint(0, 300))))
        assert edit_distance(x, y) == edit_distance_lowmem(x, y) == edit_distance_bitparallel(x, y)


def test_lowmem_length_1000():
    rng = random.Random(3)
    for _ in range(3):
        x = SymbolString(4, tuple(rng.randrange(4) for _ in range(1000)))
        y = SymbolString(4, tuple(rng.randrange(4) for _ in range(1000)))
        assert edit_distance_lowmem(x, y) == edit_distance(x, y)


def test_hamming():
    assert hamming_distance(S("aba", 2), S("bab", 2)) == 3
    assert hamming_distance(S("abc"), S("abc")) == 0
    with pytest.raises(ValueError):
        hamming_distance(S("ab"), S("abc"))
    with pytest.raises(AlphabetMismatchError):
        hamming_distance(S("ab", 2), S("ab", 3))
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(0, 40)
        x = SymbolString(3, tuple(rng.randrange(3) for _ in range(n)))
        y = SymbolString(3, tuple(rng.randrange(3) for _ in range(n)))
        assert hamming_distance(x, y) >= edit_distance_bitparallel(x, y)


def test_kernel_switch(monkeypatch):
    monkeypatch.setenv("EXPEDIT_DISABLE_BITPARALLEL", "1")
    assert default_kernel() is edit_distance_lowmem
    monkeypatch.delenv("EXPEDIT_DISABLE_BITPARALLEL")
    assert default_kernel() is edit_distance_bitparallel
    assert raw_kernel(edit_distance)((0, 1), (1, 0)) == 2


def test_symbol_string_validation():
    with pytest.raises(ValueError):
        SymbolString(1, ())
    with pytest.raises(ValueError):
        SymbolString(2, (0, 2))
    assert len(SymbolString(2, ())) == 0
    big = SymbolString(2**40, (2**40 - 1, 0))
    assert big.reversed().symbols == (0, 2**40 - 1)


# -- properties ---------------------------------------------------------------

def strings_over(k, max_len=8):
    return st.lists(st.integers(0, k - 1), max_size=max_len).map(lambda s: SymbolString(k, tuple(s)))


@st.composite
def triples(draw):
    k = draw(st.integers(2, 3))
    return draw(strings_over(k)), draw(strings_over(k)), draw(strings_over(k))


@settings(max_examples=300, deadline=None)
@given(triples())
def test_metric_axioms(t):
    x, y, z = t
    d = edit_distance_lowmem
    assert d(x, x) == 0
    assert d(x, y) == d(y, x)
    assert d(x, z) <= d(x, y) + d(y, z)
    assert abs(len(x) - len(y)) <= d(x, y) <= max(len(x), len(y))
    assert (d(x, y) == 0) == (x.symbols == y.symbols)


@settings(max_examples=300, deadline=None)
@given(triples(), st.randoms(use_true_random=False))
def test_reversal_and_permutation_invariance(t, rnd):
    x, y, _ = t
    d = edit_distance_bitparallel(x, y)
    assert edit_distance_bitparallel(x.reversed(), y.reversed()) == d
    perm = list(range(x.k))
    rnd.shuffle(perm)
    assert edit_distance_bitparallel(x.permuted(perm), y.permuted(perm)) == d


@pytest.mark.parametrize("n", range(1, 7))
def test_single_edit_sensitivity_exhaustive(n):
    # Changing one position of x moves d(x, y) by at most 1, for every y.
    ys = all_strings(2, n)
    table = np.stack([distances_to_all(x, ys) for x in ys])
    for xi in range(len(ys)):
        for pos in range(n):
            flipped = xi ^ (1 << (n - 1 - pos))
            assert np.abs(table[xi] - table[flipped]).max() <= 1
