"""Monte Carlo estimates of alpha_k(n) and alpha_k with McDiarmid intervals.

Pair ``i`` of a run with seed ``s`` is drawn from a Philox counter-based
generator keyed by ``(s, i)``, so a sample never depends on how pairs are
split across workers.  Distances are integers and are accumulated exactly;
the reported floats are therefore identical for any worker count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Literal, Sequence

import numpy as np

from .distance import Kernel, raw_kernel
from .strings import SymbolString

MASK64 = (1 << 64) - 1

Sampler = Callable[[int, int, int, int], tuple[SymbolString, SymbolString]]


@dataclass(frozen=True)
class SampleStats:
    k: int
    n: int
    N: int
    mean_distance: float
    alpha_tilde: float
    sample_stddev: float
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConfidenceInterval:
    center: float
    radius: float
    level: float
    n: int
    N: int
    kind: Literal["for_alpha_n", "for_alpha_limit"]

    @property
    def lower(self) -> float:
        return self.center - self.radius

    @property
    def upper(self) -> float:
        return self.center + self.radius

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return asdict(self)


def default_workers() -> int:
    return int(os.environ.get("EXPEDIT_WORKERS", "1"))


def _rng(seed: int, index: int) -> np.random.Generator:
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if index < 0:
        raise ValueError("pair index must be non-negative")
    key = np.array([seed, index & MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(rng: np.random.Generator, k: int, n: int, dists: np.ndarray | None) -> np.ndarray:
    if dists is None:
        # Generator.integers rejects out-of-range draws, so no modulo bias.
        return rng.integers(0, k, size=n, dtype=np.int64)
    cdf = np.cumsum(dists, axis=1)
    u = rng.random(n)
    out = (u[:, None] >= cdf).sum(axis=1)
    return np.minimum(out, k - 1)


def sample_pair(
    seed: int,
    index: int,
    k: int,
    n: int,
    dists: Sequence[Sequence[float]] | None = None,
) -> tuple[SymbolString, SymbolString]:
    """The ``index``-th random pair of the stream keyed by ``seed``.

    ``dists`` optionally gives an ``(n, k)`` table of per-position symbol
    probabilities, used for both strings; the default is uniform.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    d = None if dists is None else _check_dists(dists, k, n)
    rng = _rng(seed, index)
    x = _draw(rng, k, n, d)
    y = _draw(rng, k, n, d)
    return SymbolString(k, tuple(x.tolist())), SymbolString(k, tuple(y.tolist()))


def _check_dists(dists, k: int, n: int) -> np.ndarray:
    d = np.asarray(dists, dtype=float)
    if d.shape != (n, k):
        raise ValueError(f"dists must have shape ({n}, {k}), got {d.shape}")
    if (d < 0).any() or not np.allclose(d.sum(axis=1), 1.0):
        raise ValueError("each dists row must be a probability vector")
    return d


def _distance_block(args) -> tuple[int, int]:
    seed, start, stop, k, n, kernel, sampler, dists = args
    dist = raw_kernel(kernel)
    s1 = s2 = 0
    for i in range(start, stop):
        if sampler is None:
            x, y = sample_pair(seed, i, k, n, dists)
        else:
            x, y = sampler(seed, i, k, n)
        d = dist(x.symbols, y.symbols)
        s1 += d
        s2 += d * d
    return s1, s2


def estimate_alpha_n(
    k: int,
    n: int,
    N: int,
    seed: int,
    workers: int | None = None,
    kernel: Kernel | None = None,
    sampler: Sampler | None = None,
    dists: Sequence[Sequence[float]] | None = None,
) -> SampleStats:
    """Average per-symbol distance over ``N`` independent random pairs.

    ``sampler`` replaces :func:`sample_pair` (it must be picklable when
    ``workers > 1``).  The sample standard deviation is that of the single
    pair distance, with an ``N - 1`` denominator; it is reported as 0 for N = 1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    workers = workers or default_workers()
    block = max(1, math.ceil(N / (4 * workers))) if workers > 1 else N
    jobs = [(seed, a, min(a + block, N), k, n, kernel, sampler, dists) for a in range(0, N, block)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_distance_block, jobs))
    else:
        parts = [_distance_block(job) for job in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    var = Fraction(N * s2 - s1 * s1, N * (N - 1)) if N > 1 else Fraction(0)
    return SampleStats(
        k=k,
        n=n,
        N=N,
        mean_distance=float(Fraction(s1, N)),
        alpha_tilde=float(Fraction(s1, N * n)),
        sample_stddev=math.sqrt(var),
        seed=seed,
    )


def _check_level(lam: float) -> None:
    if not 0 < lam < 1:
        raise ValueError(f"confidence level must lie in (0, 1), got {lam}")


def delta_radius(n: int, N: int, lam: float) -> float:
    """McDiarmid radius for ``alpha_tilde`` at confidence ``lam``."""
    _check_level(lam)
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    return math.sqrt(math.log(2 / (1 - lam)) / (N * n))


def q_rate_bound(n: int) -> float:
    """Upper bound on ``alpha_k(n) - alpha_k``, valid for every k."""
    if n < 2:
        raise ValueError("Q(n) is defined for n >= 2")
    m = n - 1
    return math.sqrt(2 / m * ((n + 1) / m + math.log(m))) + 1 / m


def ci_alpha_n(stats: SampleStats, lam: float) -> ConfidenceInterval:
    return ConfidenceInterval(
        center=stats.alpha_tilde,
        radius=delta_radius(stats.n, stats.N, lam),
        level=lam,
        n=stats.n,
        N=stats.N,
        kind="for_alpha_n",
    )


def ci_alpha_limit(stats: SampleStats, lam: float) -> ConfidenceInterval:
    half_q = q_rate_bound(stats.n) / 2
    return ConfidenceInterval(
        center=stats.alpha_tilde - half_q,
        radius=half_q + delta_radius(stats.n, stats.N, lam),
        level=lam,
        n=stats.n,
        N=stats.N,
        kind="for_alpha_limit",
    )


def estimate_c_alpha(
    k: int,
    n: int,
    N: int,
    seed: int,
    workers: int | None = None,
    kernel: Kernel | None = None,
    sampler: Sampler | None = None,
) -> float:
    """Empirical ``(1 - alpha_tilde) * k`` for the large-k conjecture probe."""
    stats = estimate_alpha_n(k, n, N, seed, workers=workers, kernel=kernel, sampler=sampler)
    return (1 - stats.alpha_tilde) * k
