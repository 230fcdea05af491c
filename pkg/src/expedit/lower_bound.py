"""Certified lower bound ``beta_k*`` on the limit constant alpha_k.

The bound comes from counting strings in an edit ball.  Writing
``G_k(beta) = max_delta g_k(beta, delta)``, every ``beta`` with
``G_k(beta) < 0`` is a lower bound on alpha_k, and ``beta_k*`` is the unique
zero of ``G_k``.  Computing it rigorously takes three layers:

* :func:`G_bracket` encloses ``G_k(beta)`` between ``max(g(dl), g(dr))`` and
  the intersection of the tangents at ``dl`` and ``dr``, bisecting on the
  sign of the derivative;
* :func:`sign_G` certifies the sign of ``G_k(beta)`` with a shrinking error
  threshold and an explicit iteration budget (it answers ``INCONCLUSIVE``
  rather than guessing);
* :func:`beta_star` runs a trisection on ``[0, 1]`` driven by ``sign_G``.

All arithmetic goes through an evaluator returning ``(value, error_bound)``
pairs.  :class:`FloatArithmetic` uses doubles with a conservative rounding
error bound; :class:`IntervalArithmetic` uses mpmath interval arithmetic at
a configurable precision.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Generator, Optional

import mpmath
from mpmath import iv

from . import exponent as ent

U = 2.0 ** -53
TINY = 1e-300
DEFAULT_BUDGET = 200


class Sign(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GEvalPoint:
    k: int
    beta: float
    delta: float
    g: float
    dg: float


def evaluate_point(k: int, beta: float, delta: float) -> GEvalPoint:
    dg = ent.dg_ddelta(k, beta, delta) if beta > 0 else math.nan
    return GEvalPoint(k, beta, delta, ent.g(k, beta, delta), dg)


@dataclass
class BetaBracket:
    """Result of :func:`beta_star`.  ``lower`` is certified to have G < 0."""

    k: int
    lower: float
    upper: float
    sign_evals: int
    status: str
    eps: float
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return asdict(self)


# -- evaluators ---------------------------------------------------------------
#
# ``k=None`` drops the alphabet terms, leaving 2H(delta) + (1-delta)H(t); this
# is the function maximized for the constant M.

def _alphabet_logs(k: Optional[int]) -> tuple[float, float]:
    if k is None:
        return 0.0, 0.0
    return math.log2(k - 1), math.log2(k)


def _spread(x: float) -> float:
    # |log1p(-x)| + |log x| in bits, the size of the pieces of H'(x).
    return (abs(math.log1p(-x)) + abs(math.log(x))) * ent.LOG2E


class FloatArithmetic:
    """Double precision with a deliberately generous rounding error bound.

    Every term of ``g`` and ``dg`` is computed to within a few ulps, so
    ``16 u`` times the sum of the term magnitudes (plus the sensitivity of
    the entropy terms to the rounding of ``t``) bounds the total error.
    """

    fixed = True
    name = "double"

    def g(self, k, beta: float, delta: float, eps: float) -> tuple[float, float]:
        A, B = _alphabet_logs(k)
        a = beta - 2.0 * delta
        b = 1.0 - delta
        t = min(1.0, max(0.0, a / b))
        terms = (a * A, -b * B, 2.0 * ent.entropy(delta), b * ent.entropy(t))
        err = 16 * U * sum(abs(x) for x in terms) + TINY
        if 0.0 < t < 1.0:
            err += 4 * U * b * t * abs(ent.entropy_d1(t))
        return math.fsum(terms), err

    def dg(self, k, beta: float, delta: float, eps: float) -> tuple[float, float]:
        if delta <= 0.0:
            return math.inf, 0.0
        a = beta - 2.0 * delta
        if a <= 0.0:
            return -math.inf, 0.0
        A, B = _alphabet_logs(k)
        b = 1.0 - delta
        t = min(1.0, a / b)
        c = (2.0 - beta) / b
        h1t = ent.entropy_d1(t)
        Ht = ent.entropy(t)
        terms = (B - 2.0 * A, 2.0 * ent.entropy_d1(delta), -Ht, -c * h1t)
        scale = abs(B) + 2 * abs(A) + 2 * _spread(delta) + Ht + abs(c) * (_spread(t) + abs(h1t))
        err = 16 * U * scale + 6 * U * abs(c) * ent.LOG2E / (1.0 - t) + 4 * U * t * abs(h1t) + TINY
        return math.fsum(terms), err


class IntervalArithmetic:
    """mpmath interval arithmetic; precision grows as the target eps shrinks."""

    fixed = False
    name = "interval"

    def __init__(self, precision_bits: int = 113):
        if precision_bits < 53:
            raise ValueError("precision_bits must be >= 53")
        self.precision_bits = precision_bits

    def _prec(self, eps: float) -> int:
        need = int(-math.log2(eps)) + 40 if 0 < eps < 1 else 0
        return max(self.precision_bits, need)

    @staticmethod
    def _H(x):
        one = iv.mpf(1)
        return -(x * iv.log(x) + (one - x) * iv.log(one - x)) / iv.log(2)

    @staticmethod
    def _H1(x):
        return (iv.log(iv.mpf(1) - x) - iv.log(x)) / iv.log(2)

    def _logs(self, k):
        if k is None:
            return iv.mpf(0), iv.mpf(0)
        ln2 = iv.log(2)
        return iv.log(k - 1) / ln2, iv.log(k) / ln2

    def _finish(self, r) -> tuple[float, float]:
        with mpmath.workprec(iv.prec + 10):
            lo, hi = mpmath.mpf(r.a), mpmath.mpf(r.b)
            val = float((lo + hi) / 2)
            err = float(max(hi - val, val - lo))
        return val, err * (1 + 2.0 ** -40) + TINY

    def g(self, k, beta: float, delta: float, eps: float) -> tuple[float, float]:
        old = iv.prec
        iv.prec = self._prec(eps)
        try:
            A, B = self._logs(k)
            be, de = iv.mpf(beta), iv.mpf(delta)
            a = be - 2 * de
            b = iv.mpf(1) - de
            r = a * A - b * B
            if delta > 0:
                r += 2 * self._H(de)
            if beta - 2 * delta > 0 and not (delta == 0 and beta == 1):
                r += b * self._H(a / b)
            return self._finish(r)
        finally:
            iv.prec = old

    def dg(self, k, beta: float, delta: float, eps: float) -> tuple[float, float]:
        if delta <= 0.0:
            return math.inf, 0.0
        if beta - 2.0 * delta <= 0.0:
            return -math.inf, 0.0
        old = iv.prec
        iv.prec = self._prec(eps)
        try:
            A, B = self._logs(k)
            be, de = iv.mpf(beta), iv.mpf(delta)
            b = iv.mpf(1) - de
            t = (be - 2 * de) / b
            r = B - 2 * A + 2 * self._H1(de) - self._H(t) - (2 - be) / b * self._H1(t)
            return self._finish(r)
        finally:
            iv.prec = old


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta = {beta} outside [0, 1]")


def _lines_upper(y1, s1, x1, y2, s2, x2, lo, hi) -> float:
    """Upper bound on max over [lo, hi] of min(L1, L2) for the two lines.

    ``L1(x) = y1 + s1 (x - x1)``, likewise ``L2``.  A line with infinite
    slope is a vertical tangent and constrains nothing inside the domain.
    """
    lines = [(y, s, x) for y, s, x in ((y1, s1, x1), (y2, s2, x2)) if math.isfinite(s)]
    if not lines:
        return math.inf

    def env(x):
        return min(y + s * (x - x0) for y, s, x0 in lines)

    cands = [env(lo), env(hi)]
    if len(lines) == 2 and s1 > 0 > s2:
        xc = (y2 - y1 + s1 * x1 - s2 * x2) / (s1 - s2)
        xc = min(hi, max(lo, xc))
        # Off the exact crossing, one of the two lines lies above the peak.
        cands.append(max(y + s * (xc - x0) for y, s, x0 in lines))
    span = hi - lo
    margin = 16 * U * sum(abs(y) + abs(s) * span + abs(s * x0) for y, s, x0 in lines) + TINY
    return max(cands) + margin


def _tangent_bound(ev, k, beta, dl, dr, eps) -> tuple[float, float]:
    """(rigorous lower, rigorous upper) bound on G from the endpoints dl, dr."""
    gl, el = ev.g(k, beta, dl, eps)
    gr, er = ev.g(k, beta, dr, eps)
    sl, esl = ev.dg(k, beta, dl, eps)
    sr, esr = ev.dg(k, beta, dr, eps)
    lo = max(gl - el, gr - er)
    hi = _lines_upper(gl + el, sl + esl, dl, gr + er, sr - esr, dr, 0.0, beta / 2)
    return lo, hi


def tangent_upper(k: int, beta: float, delta_l: float, delta_r: float) -> float:
    """Ordinate of the intersection of the tangents to g at delta_l and delta_r.

    By concavity this is at least ``G_k(beta)``.
    """
    _check_beta(beta)
    if not 0.0 < delta_l < delta_r < beta / 2:
        raise ValueError("need 0 < delta_l < delta_r < beta/2")
    sl = ent.dg_ddelta(k, beta, delta_l)
    sr = ent.dg_ddelta(k, beta, delta_r)
    if not (math.isfinite(sl) and math.isfinite(sr) and sl > 0 > sr):
        raise ValueError("tangent bracket needs dg(delta_l) > 0 > dg(delta_r), both finite")
    gl = ent.g(k, beta, delta_l)
    gr = ent.g(k, beta, delta_r)
    return (sl * sr * (delta_l - delta_r) + sl * gr - sr * gl) / (sl - sr)


def _g_bracket(ev, k, beta: float, eps: float) -> tuple[float, float]:
    if beta == 0.0:
        v = -math.log2(k)
        return v, v

    def dg(d):
        return ev.dg(k, beta, d, eps)[0]

    def exact(d):
        v, e = ev.g(k, beta, d, eps)
        return v - e, v + e

    quarter = beta / 4
    s = dg(quarter)
    if s == 0.0:
        return exact(quarter)
    j = 2
    if s > 0:
        dl = quarter
        while True:
            mu = (1 - 2.0 ** -j) * beta / 2
            s = dg(mu)
            if s == 0.0:
                return exact(mu)
            if s < 0:
                dr = mu
                break
            dl, j = mu, j + 1
    else:
        dr = quarter
        while True:
            nu = 2.0 ** -j * beta / 2
            s = dg(nu)
            if s == 0.0:
                return exact(nu)
            if s > 0:
                dl = nu
                break
            dr, j = nu, j + 1

    lo, hi = -math.inf, math.inf
    while True:
        blo, bhi = _tangent_bound(ev, k, beta, dl, dr, eps)
        # Every bracket is valid, so their intersection is too (keeps nesting).
        lo, hi = max(lo, blo), min(hi, bhi)
        if hi - lo < eps:
            return lo, hi
        c = (dl + dr) / 2
        if not dl < c < dr:
            return lo, hi
        s = dg(c)
        if s == 0.0:
            elo, ehi = exact(c)
            return max(lo, elo), min(hi, ehi)
        if s > 0:
            dl = c
        else:
            dr = c


def G_bracket(k: int, beta: float, eps: float, evaluator=None) -> tuple[float, float]:
    """Interval ``[G_lo, G_hi]`` containing ``G_k(beta)``, aiming at width < eps.

    When the delta-interval shrinks to adjacent doubles before reaching eps
    the best bracket found is returned; its width then reflects the working
    precision.
    """
    _check_beta(beta)
    ent._check_k(k)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return _g_bracket(evaluator or FloatArithmetic(), k, beta, eps)


# -- sign of G ----------------------------------------------------------------

class _Probe:
    """Certify the sign of one quantity with thresholds 2^-1, 2^-2, ..."""

    def __init__(self, fn, x: float, budget: int, fixed: bool):
        self.fn = fn
        self.x = x
        self.budget = budget
        self.fixed = fixed
        self.i = 0
        self._cache = None

    @property
    def exhausted(self) -> bool:
        return self.i >= self.budget

    @property
    def level(self) -> float:
        return 2.0 ** -self.i

    def step(self) -> Optional[Sign]:
        self.i += 1
        eps = self.level
        if self._cache is None or not self.fixed:
            self._cache = self.fn(self.x, eps)
        v, e = self._cache
        if v > e and v >= eps:
            return Sign.POSITIVE
        if v < -e and v <= -eps:
            return Sign.NEGATIVE
        return None


def _race(probes) -> Generator[None, None, tuple]:
    """Step the probes in turn; the first certified sign wins."""
    while True:
        live = False
        for p in probes:
            if p.exhausted:
                continue
            live = True
            s = p.step()
            yield
            if s is not None:
                return p, s
        if not live:
            return None, None


def _sign_process(ev, k, beta: float, budget: int) -> Generator[None, None, Sign]:
    fixed = ev.fixed

    def gfun(d, eps):
        return ev.g(k, beta, d, eps)

    def dgfun(d, eps):
        return ev.dg(k, beta, d, eps)

    def probe(fn, x):
        return _Probe(fn, x, budget, fixed)

    if beta == 0.0:
        _, s = yield from _race([probe(gfun, 0.0)])
        return s or Sign.INCONCLUSIVE

    first, s = yield from _race([probe(dgfun, beta / 4), probe(dgfun, beta / 8)])
    if s is None:
        return Sign.INCONCLUSIVE
    j = 2
    if s is Sign.POSITIVE:
        dl = first.x
        while True:
            pa = probe(dgfun, (1 - 2.0 ** -j) * beta / 2)
            pb = probe(dgfun, (1 - 2.0 ** -(j + 1)) * beta / 2)
            q, s = yield from _race([pa, pb])
            if s is None:
                return Sign.INCONCLUSIVE
            if s is Sign.NEGATIVE:
                dr = q.x
                break
            dl = max(dl, q.x)
            j += 1 if q is pa else 2
    else:
        dr = first.x
        while True:
            pa = probe(dgfun, 2.0 ** -j * beta / 2)
            pb = probe(dgfun, 2.0 ** -(j + 1) * beta / 2)
            q, s = yield from _race([pa, pb])
            if s is None:
                return Sign.INCONCLUSIVE
            if s is Sign.POSITIVE:
                dl = q.x
                break
            dr = min(dr, q.x)
            j += 1 if q is pa else 2

    level = 1.0
    for i in range(1, budget + 1):
        eta = min(2.0 ** -i, level)
        lo, hi = _tangent_bound(ev, k, beta, dl, dr, eta)
        if lo >= eta:
            return Sign.POSITIVE
        if hi <= -eta:
            return Sign.NEGATIVE
        yield
        c1, c2 = (2 * dl + dr) / 3, (dl + 2 * dr) / 3
        if not dl < c1 < c2 < dr:
            return Sign.INCONCLUSIVE
        q, s = yield from _race([probe(dgfun, c1), probe(dgfun, c2)])
        if s is None:
            return Sign.INCONCLUSIVE
        level = q.level
        if s is Sign.POSITIVE:
            dl = q.x
        else:
            dr = q.x
    return Sign.INCONCLUSIVE


def _finish(gen) -> Sign:
    try:
        while True:
            next(gen)
    except StopIteration as stop:
        return stop.value


def sign_G(k: int, beta: float, budget: int = DEFAULT_BUDGET, evaluator=None) -> Sign:
    """Certified sign of ``G_k(beta)``, or ``INCONCLUSIVE`` once the budget runs out."""
    _check_beta(beta)
    if k is not None:
        ent._check_k(k)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    return _finish(_sign_process(evaluator or FloatArithmetic(), k, beta, budget))


def _race_signs(gens) -> list[tuple[int, Sign]]:
    """Interleave sign processes; return (index, sign) in completion order
    until one is conclusive or all have finished."""
    live = dict(enumerate(gens))
    done = []
    while live:
        for idx in list(live):
            try:
                next(live[idx])
            except StopIteration as stop:
                del live[idx]
                done.append((idx, stop.value))
                if stop.value is not Sign.INCONCLUSIVE:
                    return done
    return done


def beta_star(
    k: int,
    eps: float = 1e-8,
    budget: int = DEFAULT_BUDGET,
    evaluator=None,
) -> BetaBracket:
    """Trisection for the zero of ``G_k`` on ``[0, 1]``.

    ``lower`` is always a point where ``G_k < 0`` has been certified (or 0,
    where ``G_k = -log2 k``), hence a guaranteed lower bound on alpha_k.
    """
    ent._check_k(k)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ev = evaluator or FloatArithmetic()
    a, b = 0.0, 1.0
    steps = math.ceil(math.log(1 / eps) / math.log(1.5)) if eps < 1 else 0
    evals = 0
    status = "certified"
    trace = [(a, b)]
    for _ in range(steps):
        cands = ((2 * a + b) / 3, (a + 2 * b) / 3)
        evals += 2
        results = _race_signs([_sign_process(ev, k, c, budget) for c in cands])
        idx, s = results[-1]
        if s is Sign.INCONCLUSIVE:
            status = "budget_exhausted"
            break
        if s is Sign.NEGATIVE:
            a = cands[idx]
        else:
            b = cands[idx]
        trace.append((a, b))
    return BetaBracket(k=k, lower=a, upper=b, sign_evals=evals, status=status, eps=eps, trace=trace)


# -- the analytic bound ----------------------------------------------------------

@dataclass(frozen=True)
class MBracket:
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


_M_CACHE: dict[float, MBracket] = {}


def max_entropy_constant(eps: float = 1e-10) -> MBracket:
    """Certified bracket for M = max of 2H(d) + (1-d)H((b-2d)/(1-d)).

    For fixed ``d`` the inner maximum over ``b`` is closed form: the entropy
    term can reach 1 while ``d <= 1/3``, giving ``2H(d) + 1 - d`` (increasing
    there), and is attained at ``b = 1`` beyond.  So M is the larger of the
    value at ``d = 1/3`` and the maximum of the ``b = 1`` slice, which is the
    concave one-dimensional problem handled by the G machinery.
    """
    if eps in _M_CACHE:
        return _M_CACHE[eps]
    ev = FloatArithmetic()
    third = 1.0 / 3.0
    v = 2 * ent.entropy(third) + 1 - third
    edge = (v - 1e-14, v + 1e-14)
    slope, err = ev.dg(None, 1.0, third, eps)
    if slope - err <= 0:
        raise ArithmeticError("could not certify the maximizer lies beyond 1/3")
    lo, hi = _g_bracket(ev, None, 1.0, eps)
    out = MBracket(max(lo, edge[0]), max(hi, edge[1]))
    _M_CACHE[eps] = out
    return out


def beta_hat_analytic(k: int) -> float:
    """Closed-form lower bound ``1 - M / log2(k - 1)``, using the upper end of M."""
    if k < 3:
        raise ValueError("the analytic bound needs k >= 3")
    return 1.0 - max_entropy_constant().upper / math.log2(k - 1)


# -- ball counting -----------------------------------------------------------------

def _check_nr(n: int, r: int, lo: int) -> None:
    if n < 0 or not lo <= r <= n:
        raise ValueError(f"need {lo} <= r <= n, got r={r}, n={n}")


def css_count(k: int, n: int, r: int) -> int:
    """Number of canonical simple scripts of cost exactly r on a length-n string."""
    ent._check_k(k)
    _check_nr(n, r, 0)
    return sum(
        math.comb(n, d) ** 2 * math.comb(n - d, r - 2 * d) * (k - 1) ** (r - 2 * d) * k ** d
        for d in range(r // 2 + 1)
    )


@dataclass(frozen=True)
class BallBound:
    k: int
    n: int
    r: int
    u: int


def ball_upper_bound(k: int, n: int, r: int) -> BallBound:
    """Integer upper bound on the size of any radius-r edit ball in length-n strings."""
    ent._check_k(k)
    _check_nr(n, r, 1)
    u = sum(
        math.comb(n, d) ** 2 * math.comb(n - d + 1, r - 2 * d) * (k - 1) ** (r - 2 * d) * k ** d
        for d in range(r // 2 + 1)
    )
    return BallBound(k, n, r, u)


def ecc_lower_bound(k: int, n: int, r_star: int) -> Fraction:
    """Lower bound ``r* (1 - u / k^n)`` on every eccentricity, clamped at 0."""
    ent._check_k(k)
    _check_nr(n, r_star, 0)
    if r_star == 0:
        return Fraction(0)
    u = ball_upper_bound(k, n, r_star).u
    return max(Fraction(0), r_star * (1 - Fraction(u, k ** n)))


def exponential_bound_rhs(k: int, beta: float, n: int) -> float:
    """``(n+1) * sum_d 2^(n g_k(beta, d/n))`` over ``0 <= d <= beta n / 2``."""
    ent._check_k(k)
    _check_beta(beta)
    if n < 1:
        raise ValueError("n must be >= 1")
    top = math.floor(beta * n / 2)
    total = math.fsum(2.0 ** (n * ent.g(k, beta, min(d / n, beta / 2))) for d in range(top + 1))
    return (n + 1) * total
