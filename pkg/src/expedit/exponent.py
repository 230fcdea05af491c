"""Binary entropy and the ball-size exponent ``g_k(beta, delta)``.

``g_k(beta, delta)`` is the base-2 exponent (per symbol) of the number of
canonical simple scripts of cost ``beta*n`` with ``delta*n`` deletions,
relative to ``k^n``.  For fixed ``beta`` it is strictly concave in ``delta``
on ``[0, beta/2]``, which is what the root finders in :mod:`lower_bound`
rely on.
"""
from __future__ import annotations

import math

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2


def _check_unit(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"argument {x} outside [0, 1]")


def entropy(x: float) -> float:
    _check_unit(x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log1p(-x) * LOG2E


def entropy_d1(x: float) -> float:
    """``log2((1-x)/x)``; +inf at 0 and -inf at 1."""
    _check_unit(x)
    if x == 0.0:
        return math.inf
    if x == 1.0:
        return -math.inf
    return (math.log1p(-x) - math.log(x)) * LOG2E


def entropy_d2(x: float) -> float:
    _check_unit(x)
    if x == 0.0 or x == 1.0:
        return -math.inf
    return -LOG2E / (x * (1.0 - x))


def _check_domain(beta: float, delta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta = {beta} outside [0, 1]")
    if not 0.0 <= delta <= beta / 2:
        raise ValueError(f"delta = {delta} outside [0, beta/2] = [0, {beta / 2}]")


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"alphabet size must be >= 2, got {k}")


def _ratio(beta: float, delta: float) -> float:
    # Substituted fraction among retained cells; clamp guards rounding at beta/2.
    return max(0.0, (beta - 2.0 * delta) / (1.0 - delta))


def g(k: int, beta: float, delta: float) -> float:
    _check_k(k)
    _check_domain(beta, delta)
    t = _ratio(beta, delta)
    return (
        (beta - 2.0 * delta) * math.log2(k - 1)
        - (1.0 - delta) * math.log2(k)
        + 2.0 * entropy(delta)
        + (1.0 - delta) * entropy(min(t, 1.0))
    )


def dg_ddelta(k: int, beta: float, delta: float) -> float:
    """Partial derivative of ``g`` in ``delta``; +inf at 0, -inf at beta/2."""
    _check_k(k)
    _check_domain(beta, delta)
    if beta == 0.0:
        raise ValueError("derivative undefined on the degenerate domain beta = 0")
    if delta == 0.0:
        return math.inf
    if delta == beta / 2:
        return -math.inf
    t = _ratio(beta, delta)
    return (
        math.log2(k) - 2.0 * math.log2(k - 1)
        + 2.0 * entropy_d1(delta)
        - entropy(t)
        - (2.0 - beta) / (1.0 - delta) * entropy_d1(t)
    )


def d2g_ddelta2(k: int, beta: float, delta: float) -> float:
    _check_k(k)
    _check_domain(beta, delta)
    if not 0.0 < delta < beta / 2:
        raise ValueError("second derivative is only finite for 0 < delta < beta/2")
    t = _ratio(beta, delta)
    return 2.0 * entropy_d2(delta) + (2.0 - beta) ** 2 / (1.0 - delta) ** 3 * entropy_d2(t)
