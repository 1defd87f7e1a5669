"""Three-player finite-deck game with Players II and III using the same strategy.

The solver searches the strategy shape seen in every computed equilibrium:
Player I bluffs with the bottom cards (fully below card ``a``, with
probability ``alpha`` at ``a``), checks the middle and bets everything from
``B_cut`` up; the callers fold below ``c``, call with probability ``gamma``
at ``c`` and always call above it.  For each integer shape the two
indifference conditions are linear in (gamma, alpha) and are solved
exactly; a candidate is returned only after the exact deviation check
passes for all three players.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

import numpy as np

from .exact_arith import format_rational, format_vector
from .game_model import (
    GameParams,
    ThreeStrategyProfile,
    bettor_sums,
    caller_sums,
    check_card_strategy,
    payoff_three,
)
from .pure_ne import all_subsets
from .verify import DeviationReport, epsilon_ne_three

logger = logging.getLogger(__name__)

__all__ = [
    "PayoffTensors",
    "ThreeNESolution",
    "NoEquilibriumFound",
    "build_tensors",
    "tensor_mixture_value",
    "three_fast_ne",
    "three_value_scan",
]

TENSOR_MAX_N = 5


class NoEquilibriumFound(RuntimeError):
    def __init__(self, message, best=None, gaps=None):
        super().__init__(message)
        self.best = best
        self.gaps = gaps


@dataclass
class PayoffTensors:
    """Expected payoffs of all three players for every triple of subset strategies.

    ``m1[s1, s2, s3]`` etc. are integers scaled by ``denominator``.
    """

    params: GameParams
    strategies: List[Tuple[int, ...]]
    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    denominator: int

    def entry(self, s1: int, s2: int, s3: int) -> Tuple[Fraction, Fraction, Fraction]:
        d = self.denominator
        return tuple(Fraction(int(m[s1, s2, s3]), d) for m in (self.m1, self.m2, self.m3))


def _deal_outcomes(i, j, k, B):
    """Gains of the three players for each (bet, II calls, III calls) triple of actions."""
    top = max(i, j, k)
    show = tuple(2 if c == top else -1 for c in (i, j, k))
    out = {}
    for bet, c2, c3 in product((0, 1), repeat=3):
        if not bet:
            out[bet, c2, c3] = show
        elif c2 and c3:
            out[bet, c2, c3] = tuple(2 * B if c == top else -B for c in (i, j, k))
        elif c2:
            w = B + 1 if i > j else -B
            out[bet, c2, c3] = (w, 1 - w, -1)
        elif c3:
            w = B + 1 if i > k else -B
            out[bet, c2, c3] = (w, -1, 1 - w)
        else:
            out[bet, c2, c3] = (2, -1, -1)
    return out


def build_tensors(params: GameParams, max_n: int = TENSOR_MAX_N) -> PayoffTensors:
    n = params.n
    if n > max_n:
        raise ValueError(f"payoff tensors have 3 * 8^{n} entries; guard is n <= {max_n}")
    if n < 3:
        raise ValueError("the three-player game needs n >= 3")
    subsets = all_subsets(n)
    X = np.zeros((len(subsets), n), dtype=np.int64)
    for r, s in enumerate(subsets):
        X[r, [c - 1 for c in s]] = 1
    size = len(subsets)
    m = [np.zeros((size, size, size), dtype=np.int64) for _ in range(3)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                if len({i, j, k}) < 3:
                    continue
                table = np.zeros((2, 2, 2, 3), dtype=np.int64)
                for key, gains in _deal_outcomes(i, j, k, params.b + 1).items():
                    table[key] = gains
                sel = table[X[:, i - 1][:, None, None], X[:, j - 1][None, :, None], X[:, k - 1][None, None, :]]
                for p in range(3):
                    m[p] += sel[..., p]
    return PayoffTensors(params, subsets, m[0], m[1], m[2], n * (n - 1) * (n - 2))


def _subset_mixture(probs, subsets):
    """Distribution over subsets induced by independent per-card probabilities."""
    out = []
    for s in subsets:
        members = set(s)
        w = Fraction(1)
        for c, p in enumerate(probs, start=1):
            w *= p if c in members else 1 - p
            if not w:
                break
        out.append(w)
    return np.array(out, dtype=object)


def tensor_mixture_value(tensors: PayoffTensors, prof: ThreeStrategyProfile):
    """Expected payoffs of a card-by-card profile, evaluated through the tensors."""
    n = tensors.params.n
    x, y, z = (_subset_mixture(check_card_strategy(s, n), tensors.strategies) for s in prof)
    out = []
    for m in (tensors.m1, tensors.m2, tensors.m3):
        t = np.tensordot(m.astype(object), z, axes=([2], [0]))
        t = np.tensordot(t, y, axes=([1], [0]))
        out.append(Fraction(np.dot(t, x)) / tensors.denominator)
    return tuple(out)


@dataclass
class ThreeNESolution:
    params: GameParams
    values: Tuple[Fraction, Fraction, Fraction]
    profile: ThreeStrategyProfile
    a: int
    alpha: Fraction
    B_cut: int
    c: int
    gamma: Fraction
    certificate: DeviationReport = field(repr=False, default=None)
    method: str = "structured"

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.certified

    @property
    def structure(self):
        return self.a, self.alpha, self.B_cut, self.c, self.gamma

    def cuts(self) -> Tuple[float, float, float]:
        """Continuous-deck analogues (A, B, C) of the finite thresholds."""
        n = self.params.n
        A = (self.a - 1 + self.alpha) / n
        B = 1 - Fraction(n - self.B_cut + 1, n)
        C = 1 - (n - self.c + self.gamma) / n
        return float(A), float(B), float(C)

    def __str__(self):
        v = "[0, " + ", ".join(format_rational(x) for x in self.values) + "]"
        P, Q, R = (format_vector(s) for s in self.profile)
        return f"[{v}, {P}, {Q}, {R}]"

    def advice(self) -> List[str]:
        lines = [
            f"The value of the game is {format_rational(self.values[0])} for Player I "
            f"and {format_rational(self.values[1])} for each of Players II and III."
        ]
        for card, p in enumerate(self.profile.P, start=1):
            if p == 1:
                act = "definitely bet"
            elif p == 0:
                act = "definitely check"
            else:
                act = f"bet with probability {format_rational(p)} and check with probability {format_rational(1 - p)}"
            lines.append(f"Player I, card {card}: {act}.")
        for card, q in enumerate(self.profile.Q, start=1):
            if q == 1:
                act = "definitely call"
            elif q == 0:
                act = "definitely fold"
            else:
                act = f"call with probability {format_rational(q)} and fold with probability {format_rational(1 - q)}"
            lines.append(f"Players II and III, card {card}: {act}.")
        return lines


def _bettor_profile(n, a, alpha, B_cut):
    return tuple([1] * (a - 1) + [alpha] + [0] * (B_cut - a - 1) + [1] * (n - B_cut + 1))


def _caller_profile(n, c, gamma):
    return tuple([0] * (c - 1) + [gamma] + [1] * (n - c))


def _linear_root(f0, f1):
    """Values t in [0, 1] with f0 + t (f1 - f0) = 0."""
    slope = f1 - f0
    if slope == 0:
        return [Fraction(0), Fraction(1)] if f0 == 0 else []
    t = Fraction(-f0) / slope
    return [t] if 0 <= t <= 1 else []


def _structured_candidates(params: GameParams, corners: bool = False):
    """Shapes (a, alpha, B_cut, c, gamma) worth certifying.

    gamma makes Player I indifferent at card a and alpha makes a caller
    indifferent at card c.  With ``corners`` the pure values 0 and 1 are
    tried as well, which catches equilibria where those players strictly
    prefer one action at the boundary card.
    """
    n, B = params.n, params.b + 1
    extra = [Fraction(0), Fraction(1)] if corners else []
    for c in range(2, n):
        g_lo = [bet - chk for chk, bet in bettor_sums(n, B, _caller_profile(n, c, 0), _caller_profile(n, c, 0))]
        g_hi = [bet - chk for chk, bet in bettor_sums(n, B, _caller_profile(n, c, 1), _caller_profile(n, c, 1))]
        for a in range(1, c):
            for gamma in _dedup(_linear_root(g_lo[a - 1], g_hi[a - 1]) + extra):
                g = [lo + gamma * (hi - lo) for lo, hi in zip(g_lo, g_hi)]
                if any(x < 0 for x in g[: a - 1]):
                    continue
                # B_cut: g <= 0 strictly between a and B_cut, g >= 0 from B_cut on
                for B_cut in range(c + 1, n + 1):
                    if any(x > 0 for x in g[a : B_cut - 1]):
                        break
                    if any(x < 0 for x in g[B_cut - 1 :]):
                        continue
                    Q = _caller_profile(n, c, gamma)
                    h = [
                        call_ - fold
                        for fold, call_ in (
                            caller_sums(n, B, c, _bettor_profile(n, a, t, B_cut), Q) for t in (0, 1)
                        )
                    ]
                    for alpha in _dedup(_linear_root(h[0], h[1]) + extra):
                        yield a, alpha, B_cut, c, gamma


def _dedup(values):
    out = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


def three_fast_ne(params: GameParams, fallback: bool = True) -> ThreeNESolution:
    """A certified equilibrium with Q = R, or :class:`NoEquilibriumFound`.

    All shapes 1 <= a < c < B_cut <= n are examined; among those passing the
    exact certificate the lexicographically smallest (a, B_cut, c) wins.
    """
    n = params.n
    if n < 4:
        raise ValueError("the structured three-player search needs n >= 4")
    passing = []
    best = None
    for corners in (False, True):
        for a, alpha, B_cut, c, gamma in _structured_candidates(params, corners):
            P = _bettor_profile(n, a, alpha, B_cut)
            Q = _caller_profile(n, c, gamma)
            prof = ThreeStrategyProfile(*(tuple(Fraction(x) for x in s) for s in (P, Q, Q)))
            rep = epsilon_ne_three(params, prof)
            if rep.certified:
                passing.append(((a, B_cut, c), (a, alpha, B_cut, c, gamma), prof, rep))
            elif best is None or rep.max_gap < best[1].max_gap:
                best = (prof, rep)
        if passing:
            break
    if passing:
        passing.sort(key=lambda t: t[0])
        _, (a, alpha, B_cut, c, gamma), prof, rep = passing[0]
        values = payoff_three(params, prof)
        return ThreeNESolution(params, values, prof, a, alpha, B_cut, c, gamma, rep)
    if fallback:
        logger.warning("structured search failed for %s; trying best-response iteration", params)
        sol, prof, rep = _best_response_fallback(params)
        if sol is not None:
            return sol
        if best is None or rep.max_gap < best[1].max_gap:
            best = (prof, rep)
    elif best is None:
        # no admissible shape at all: a short iteration still gives a diagnostic candidate
        _, prof, rep = _best_response_fallback(params, rounds=200)
        best = (prof, rep)
    raise NoEquilibriumFound(
        f"no certified equilibrium found for n={params.n}, b={params.b}",
        best=best[0] if best else None,
        gaps=best[1].gaps if best else None,
    )


def _best_response_fallback(params: GameParams, rounds: int = 10_000, damping: float = 0.5, tol: float = 1e-9):
    """Damped best-response iteration in floats, snapped to rationals and certified exactly.

    Returns ``(solution or None, last profile, its deviation report)``.
    """
    n, B = params.n, params.b + 1
    d = (n - 1) * (n - 2)
    P = [0.5] * n
    Q = [0.5] * n
    for t in range(rounds):
        gI = [(bet - chk) / d for chk, bet in bettor_sums(n, B, Q, Q)]
        gII = [(call_ - fold) / d for fold, call_ in (caller_sums(n, B, j, P, Q) for j in range(1, n + 1))]
        brP = [1.0 if g > 0 else 0.0 for g in gI]
        brQ = [1.0 if g > 0 else 0.0 for g in gII]
        gap = sum(max(g, 0) - p * g for g, p in zip(gI, P)) + sum(max(g, 0) - q * g for g, q in zip(gII, Q))
        if gap / n < tol:
            break
        step = damping * 2 / (t + 2)
        P = [p + step * (x - p) for p, x in zip(P, brP)]
        Q = [q + step * (x - q) for q, x in zip(Q, brQ)]
    snap = lambda v: tuple(Fraction(x).limit_denominator(10**6) for x in v)
    prof = ThreeStrategyProfile(snap(P), snap(Q), snap(Q))
    rep = epsilon_ne_three(params, prof)
    if not rep.certified:
        return None, prof, rep
    sol = ThreeNESolution(params, payoff_three(params, prof), prof, 0, Fraction(0), 0, 0, Fraction(0), rep, "best-response")
    return sol, prof, rep


def three_value_scan(n_range, b_range) -> Dict[Tuple[int, int], object]:
    """Solution per (n, b); failures are recorded as the exception and the scan continues."""
    out = {}
    b_values = list(b_range)
    for n in n_range:
        for b in b_values:
            try:
                out[n, b] = three_fast_ne(GameParams(n, b))
            except NoEquilibriumFound as exc:
                logger.error("%s", exc)
                out[n, b] = exc
    return out
