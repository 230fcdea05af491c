import math

import numpy as np
import pytest

from expedit import (
    SymbolString,
    ci_alpha_limit,
    ci_alpha_n,
    delta_radius,
    edit_distance,
    edit_distance_lowmem,
    estimate_alpha_n,
    estimate_c_alpha,
    expected_distance_exact,
    q_rate_bound,
    sample_pair,
)
from expedit.montecarlo import SampleStats


def test_sample_pair_is_keyed_by_seed_and_index():
    a = sample_pair(7, 3, 4, 50)
    assert a == sample_pair(7, 3, 4, 50)
    assert a != sample_pair(7, 4, 4, 50)
    assert a != sample_pair(8, 3, 4, 50)
    x, y = a
    assert len(x) == len(y) == 50 and x.k == 4


def test_sample_pair_uniform_frequencies():
    counts = np.zeros(5)
    for i in range(400):
        x, y = sample_pair(1, i, 5, 50)
        counts += np.bincount(x.symbols + y.symbols, minlength=5)
    freq = counts / counts.sum()
    assert np.abs(freq - 0.2).max() < 0.01


def test_sample_pair_with_position_distributions():
    dists = [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]
    x, y = sample_pair(0, 0, 3, 2, dists)
    assert x.symbols == y.symbols == (0, 2)
    with pytest.raises(ValueError):
        sample_pair(0, 0, 3, 2, [[0.5, 0.5, 0.5], [1, 0, 0]])


def test_sample_pair_validation():
    with pytest.raises(ValueError):
        sample_pair(-1, 0, 2, 4)
    with pytest.raises(ValueError):
        sample_pair(0, 0, 1, 4)


def test_estimate_is_reproducible_and_worker_independent():
    a = estimate_alpha_n(4, 128, 40, seed=99)
    assert a == estimate_alpha_n(4, 128, 40, seed=99)
    assert a == estimate_alpha_n(4, 128, 40, seed=99, workers=2)
    assert a == estimate_alpha_n(4, 128, 40, seed=99, workers=3)
    assert a != estimate_alpha_n(4, 128, 40, seed=100)


def test_estimate_kernels_agree():
    a = estimate_alpha_n(3, 60, 20, seed=5, kernel=edit_distance)
    b = estimate_alpha_n(3, 60, 20, seed=5, kernel=edit_distance_lowmem)
    c = estimate_alpha_n(3, 60, 20, seed=5)
    assert a == b == c


def test_estimate_statistics_by_hand():
    N, n = 12, 30
    ds = [edit_distance(*sample_pair(4, i, 2, n)) for i in range(N)]
    s = estimate_alpha_n(2, n, N, seed=4)
    assert s.mean_distance == pytest.approx(np.mean(ds), abs=1e-12)
    assert s.alpha_tilde == pytest.approx(np.mean(ds) / n, abs=1e-12)
    assert s.sample_stddev == pytest.approx(np.std(ds, ddof=1), abs=1e-12)


def test_single_sample_has_zero_stddev():
    s = estimate_alpha_n(2, 10, 1, seed=0)
    assert s.sample_stddev == 0.0 and s.N == 1


def test_estimate_validation():
    with pytest.raises(ValueError):
        estimate_alpha_n(2, 10, 0, seed=0)
    with pytest.raises(ValueError):
        estimate_alpha_n(1, 10, 5, seed=0)


def _antipodal(seed, index, k, n):
    return SymbolString(k, (0,) * n), SymbolString(k, (1,) * n)


def test_custom_sampler():
    s = estimate_alpha_n(2, 6, 4, seed=0, sampler=_antipodal)
    assert s.alpha_tilde == 1.0 and s.sample_stddev == 0.0


def test_nonuniform_estimate_uses_distributions():
    n = 20
    dists = [[0.9, 0.1]] * n
    skewed = estimate_alpha_n(2, n, 60, seed=3, dists=dists)
    uniform = estimate_alpha_n(2, n, 60, seed=3)
    assert skewed.alpha_tilde < uniform.alpha_tilde


def test_delta_radius():
    assert delta_radius(2**15, 2**9, 0.999) == pytest.approx(6.7e-4, abs=5e-6)
    assert delta_radius(2**8, 2**23, 0.999) == pytest.approx(0.59e-4, abs=5e-7)
    assert delta_radius(100, 400, 0.9) == pytest.approx(delta_radius(100, 100, 0.9) / 2, rel=1e-14)
    for lam in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            delta_radius(10, 10, lam)


def test_q_rate_bound():
    assert q_rate_bound(2) == pytest.approx(math.sqrt(6) + 1, rel=1e-14)
    assert q_rate_bound(2**15) / 2 == pytest.approx(0.01320, abs=5e-6)
    with pytest.raises(ValueError):
        q_rate_bound(1)
    ns = np.unique(np.geomspace(8, 2**20, 400).astype(int))
    qs = [q_rate_bound(int(n)) for n in ns]
    assert all(a > b for a, b in zip(qs, qs[1:]))


def _stats(alpha, n, N):
    return SampleStats(k=4, n=n, N=N, mean_distance=alpha * n, alpha_tilde=alpha, sample_stddev=0.0, seed=0)


def test_ci_alpha_n():
    ci = ci_alpha_n(_stats(0.52614, 2**10, 2**19), 0.999)
    assert (round(ci.lower, 5), round(ci.upper, 5)) == (0.52602, 0.52626)
    assert ci.radius == delta_radius(2**10, 2**19, 0.999)
    assert ci.kind == "for_alpha_n" and 0.52614 in ci
    c = 0.51739
    ci = ci_alpha_n(_stats(c, 2**15, 2**9), 0.999)
    assert ci.lower == pytest.approx(c - 0.00067, abs=5e-6)
    assert ci.upper == pytest.approx(c + 0.00067, abs=5e-6)


def test_ci_alpha_limit():
    ci = ci_alpha_limit(_stats(0.51739, 2**15, 2**9), 0.999)
    assert ci.radius == pytest.approx(0.01388, abs=1e-5)
    assert ci.center == pytest.approx(0.50419, abs=1e-5)
    # The center is itself rounded to 5 decimals, hence the 1.5e-5 slack.
    assert ci.lower == pytest.approx(0.49031, abs=1.5e-5)
    assert ci.upper == pytest.approx(0.51807, abs=1.5e-5)
    assert ci.radius >= q_rate_bound(2**15) / 2
    assert ci.kind == "for_alpha_limit"


def test_ci_alpha_limit_tracks_table_rows():
    rows = {2**8: (0.53946, 2**23, 0.42418), 2**12: (0.52039, 2**15, 0.48654)}
    for n, (alpha, N, center) in rows.items():
        ci = ci_alpha_limit(_stats(alpha, n, N), 0.999)
        assert ci.center == pytest.approx(center, abs=1e-5)
        assert ci.upper == pytest.approx(ci_alpha_n(_stats(alpha, n, N), 0.999).upper, abs=1e-12)


def test_coverage_against_exact_value():
    # McDiarmid intervals are conservative: coverage should beat the level.
    _, alpha = expected_distance_exact(2, 4)
    hits = 0
    for seed in range(200):
        s = estimate_alpha_n(2, 4, 50, seed=seed)
        hits += float(alpha) in ci_alpha_n(s, 0.95)
    slack = 3 * math.sqrt(0.95 * 0.05 / 200)
    assert hits / 200 >= 0.95 - slack


def test_c_alpha_probe():
    c = estimate_c_alpha(64, 64, 4, seed=1)
    s = estimate_alpha_n(64, 64, 4, seed=1)
    assert c == pytest.approx((1 - s.alpha_tilde) * 64)
    assert 0 < c < 64


def test_to_dict_roundtrip():
    s = estimate_alpha_n(2, 16, 3, seed=2)
    assert SampleStats(**s.to_dict()) == s
