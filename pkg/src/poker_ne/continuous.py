"""Infinite-deck games: cards are independent uniform draws from (0, 1).

Two players: Player I bets below A or above B and checks in between; Player
II calls above C.  The cut points and the value have closed forms.

Three players: Player I uses the same bluff/value shape, and both callers
call above a common C.  The cuts solve three indifference conditions
(Player I at A and at B, a caller at C).  The condition at B gives
C = (3B^2 - 1) / (2B), the one at C then gives A in terms of B and C, and
the remaining condition is a scalar equation in B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "CutPoints",
    "NoAdmissibleRoot",
    "vn_continuous",
    "vn_optimal_bet",
    "three_continuous",
    "three_optimal_bet",
    "three_value",
    "three_residuals",
    "indifference_gaps",
    "advice",
]

Number = Union[float, int, Fraction]

RESIDUAL_TOL = 1e-12
_GRID = 4000


class NoAdmissibleRoot(ArithmeticError):
    def __init__(self, b, roots):
        super().__init__(f"no root with 0 < A < C < B < 1 for b={b}; real roots found: {roots}")
        self.roots = roots


@dataclass(frozen=True)
class CutPoints:
    A: Number  # Player I bets below A
    B: Number  # ... and above B
    C: Number  # callers call above C
    b: Number
    value: Number  # Player I's expected gain
    players: int = 2


def vn_continuous(b: Number) -> CutPoints:
    """Closed-form two-player solution; exact when ``b`` is an int or Fraction."""
    if b <= 0:
        raise ValueError("bet size must be positive")
    if isinstance(b, int):
        b = Fraction(b)
    den = (b + 4) * (b + 1)
    A = b / den
    return CutPoints(A=A, B=(b * b + 4 * b + 2) / den, C=b * (b + 3) / den, b=b, value=A, players=2)


def _golden_max(f, lo, mid, hi, xtol):
    res = optimize.minimize_scalar(lambda x: -f(x), bracket=(lo, mid, hi), method="golden", options={"xtol": xtol})
    return float(res.x), -float(res.fun)


def vn_optimal_bet(xtol: float = 1e-8) -> Tuple[float, float]:
    """Bet size maximizing the two-player value, by golden-section search."""
    return _golden_max(lambda b: float(vn_continuous(float(b)).value), 0.1, 1.0, 10.0, xtol)


def _cuts_from_B(B, b):
    C = (3 * B * B - 1) / (2 * B)
    A = b * (1 - B) / ((2 * b + 3) * C - b)
    return A, C


def _reduced(B, b):
    A, C = _cuts_from_B(B, b)
    return 3 * A * A - (3 + b) * C * C + b


def three_residuals(A, B, C, b) -> Tuple[float, float, float]:
    """Residuals of the three indifference equations (left minus right side)."""
    eq_a = (3 * A**2 - 1) - (3 * C**2 + b * C**2 - b - 1)
    eq_b = (3 * B**2 - 1) - (-2 * b * C * B + 3 * b * B**2 + 3 * B**2 - b - 1)
    eq_c = (-A + B - 1) - (2 * b * C * A + 3 * C * A - b * A - A - b + b * B + B - 1)
    return eq_a, eq_b, eq_c


def three_value(A, B, C, b) -> float:
    """Player I's expected gain under the cut strategies, integrated in closed form.

    Check region (A, B): three-way showdown, gain 3x^2 - 1.  Bluff region
    (0, A): every call loses.  Value region (B, 1): integrate over one or
    both callers with u = x - C.
    """
    check = B**3 - A**3 - (B - A)
    bluff = A * (2 * C * C - (b + 1) * (1 - C) * (1 + C))
    u0, u1 = B - C, 1 - C
    value_bets = (
        2 * C * ((2 * b + 3) * (u1**2 - u0**2) / 2 - (b + 1) * (1 - C) * (u1 - u0))
        + (b + 1) * (u1**3 - u0**3)
        + (2 * C * C - (b + 1) * (1 - C) ** 2) * (u1 - u0)
    )
    return check + bluff + value_bets


def three_continuous(b: float) -> CutPoints:
    """Cut points and value of the three-player infinite-deck game for bet size ``b``."""
    b = float(b)
    if b <= 0:
        raise ValueError("bet size must be positive")
    lo = 1 / math.sqrt(3)  # C > 0 needs B > 1/sqrt(3)
    grid = np.linspace(lo, 1.0, _GRID + 1)[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.array([_reduced(x, b) for x in grid])
    roots: List[float] = []
    for k in range(len(grid) - 1):
        f0, f1 = vals[k], vals[k + 1]
        if not (np.isfinite(f0) and np.isfinite(f1)):
            continue
        if f0 == 0:
            roots.append(float(grid[k]))
        elif f0 * f1 < 0:
            x0, x1 = float(grid[k]), float(grid[k + 1])
            # a sign change across the pole of A is not a root
            d0 = (2 * b + 3) * _cuts_from_B(x0, b)[1] - b
            d1 = (2 * b + 3) * _cuts_from_B(x1, b)[1] - b
            if d0 * d1 <= 0:
                continue
            roots.append(_polish(optimize.brentq(_reduced, x0, x1, args=(b,), xtol=1e-16, maxiter=500), b))
    admissible = []
    for B in roots:
        A, C = _cuts_from_B(B, b)
        if 0 < A < C < B < 1 and max(abs(r) for r in three_residuals(A, B, C, b)) < RESIDUAL_TOL:
            admissible.append((A, B, C))
    if not admissible:
        raise NoAdmissibleRoot(b, roots)
    if len(admissible) > 1:
        raise ArithmeticError(f"several admissible cut systems for b={b}: {admissible}")
    A, B, C = admissible[0]
    return CutPoints(A=A, B=B, C=C, b=b, value=three_value(A, B, C, b), players=3)


def _polish(B, b, steps=3):
    """Newton steps on the reduced equation with a central-difference slope."""
    h = 1e-7
    for _ in range(steps):
        f = _reduced(B, b)
        if f == 0:
            break
        slope = (_reduced(B + h, b) - _reduced(B - h, b)) / (2 * h)
        nxt = B - f / slope
        if abs(_reduced(nxt, b)) >= abs(f):
            break
        B = nxt
    return B


def three_optimal_bet(xtol: float = 1e-6) -> Tuple[float, float]:
    """Bet size in (0, 10] maximizing Player I's three-player value (golden-section search)."""
    return _golden_max(lambda b: three_continuous(b).value, 0.5, 2.0, 10.0, xtol)


def _rect_integral(fn, cuts):
    """Integral of a piecewise-constant fn(y, z) over the unit square, split at ``cuts``."""
    edges = sorted({0.0, 1.0, *[float(c) for c in cuts if 0 < c < 1]})
    total = 0.0
    for y0, y1 in zip(edges, edges[1:]):
        for z0, z1 in zip(edges, edges[1:]):
            val, _ = integrate.dblquad(lambda z, y: fn(y, z), y0, y1, z0, z1)
            total += val
    return total


def indifference_gaps(cuts: CutPoints) -> Tuple[float, float, float]:
    """Bet-minus-check for Player I at A and at B, and call-minus-fold for a caller at C.

    Each payoff is integrated numerically over the other two players' cards
    from the betting-tree rules; all three are zero at an equilibrium.
    """
    A, B, C, b = (float(x) for x in (cuts.A, cuts.B, cuts.C, cuts.b))
    stake = b + 1

    def showdown(x, y, z):
        return 2.0 if x > max(y, z) else -1.0

    def first_bets(x):
        def g(y, z):
            c2, c3 = y > C, z > C
            if c2 and c3:
                return 2 * stake if x > max(y, z) else -stake
            if c2:
                return stake + 1 if x > y else -stake
            if c3:
                return stake + 1 if x > z else -stake
            return 2.0
        return g

    bets_at = lambda x: (x < A) or (x > B)

    def caller(y, calls):
        def g(x, z):
            if not bets_at(x):
                return showdown(y, x, z)
            if not calls:
                return -1.0
            if z > C:
                return 2 * stake if y > max(x, z) else -stake
            return stake + 1 if y > x else -stake
        return g

    pts = (A, B, C)
    gaps = []
    for x in (A, B):
        bet = _rect_integral(first_bets(x), pts)
        check = _rect_integral(lambda y, z: showdown(x, y, z), pts)
        gaps.append(bet - check)
    gaps.append(_rect_integral(caller(C, True), pts) - _rect_integral(caller(C, False), pts))
    return tuple(gaps)


def advice(cuts: CutPoints) -> List[str]:
    fmt = lambda v: str(v) if isinstance(v, Fraction) else f"{float(v):.15f}"
    callers = "Player II" if cuts.players == 2 else "Players II and III"
    return [
        f"Player I: if 0 < x < {fmt(cuts.A)} or {fmt(cuts.B)} < x < 1 you should bet, otherwise check.",
        f"{callers}: if 0 < y < {fmt(cuts.C)} you should fold, otherwise call.",
        f"The value of the game for Player I is {fmt(cuts.value)}.",
    ]
