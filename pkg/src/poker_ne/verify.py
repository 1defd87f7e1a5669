"""Equilibrium certificates and Monte Carlo value estimates.

A deviation gap is the best pure-deviation payoff minus the current payoff.
Each game's payoff is additive over the deviating player's own cards, so the
best response is found card by card; gaps are exact rationals and an
equilibrium is certified only when every gap is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .exact_arith import format_rational
from .game_model import (
    GameParams,
    ThreeStrategyProfile,
    check_card_strategy,
    check_newman_bettor,
    check_newman_caller,
    newman_card_values,
    three_card_values,
    two_card_values,
)

__all__ = [
    "DeviationReport",
    "MonteCarloResult",
    "epsilon_ne_two",
    "epsilon_ne_newman",
    "epsilon_ne_three",
    "monte_carlo",
]


@dataclass
class DeviationReport:
    """Per-player deviation gaps, with an improving pure strategy wherever a gap is positive."""

    gaps: Tuple[Fraction, ...]
    witnesses: Tuple[Optional[tuple], ...] = field(default_factory=tuple)

    @property
    def certified(self) -> bool:
        return all(g == 0 for g in self.gaps)

    @property
    def max_gap(self) -> Fraction:
        return max(self.gaps)

    def to_json(self) -> dict:
        wit = []
        for w in self.witnesses:
            if w is None:
                wit.append(None)
            elif w and isinstance(w[0], tuple):
                wit.append([list(r) for r in w])
            else:
                wit.append(list(w))
        return {
            "gaps": [format_rational(g) for g in self.gaps],
            "certified": self.certified,
            "witnesses": wit,
        }


def _best(values, current):
    """Best pure choice index, the gain over ``current``, ties broken toward index 0."""
    best = max(range(len(values)), key=lambda k: (values[k], -k))
    return best, values[best] - current


def epsilon_ne_two(params: GameParams, P: Sequence, Q: Sequence) -> DeviationReport:
    """Exact deviation gaps of (Player I, Player II) in the fixed-bet game."""
    n = params.n
    P = check_card_strategy(P, n)
    Q = check_card_strategy(Q, n)
    first, second = two_card_values(params, P, Q)
    gaps, witnesses = [], []
    for strat, table in ((P, first), (Q, second)):
        total = Fraction(0)
        choice = []
        for x, (off, on) in zip(strat, table):
            k, gain = _best((off, on), x * on + (1 - x) * off)
            total += gain
            choice.append(k)
        gap = total / n
        gaps.append(gap)
        witnesses.append(tuple(choice) if gap > 0 else None)
    return DeviationReport(tuple(gaps), tuple(witnesses))


def epsilon_ne_newman(params: GameParams, Pm, Qm, bets=None) -> DeviationReport:
    """Exact gaps in the variable-bet game.

    Player I's witness is the best bet size per card; Player II's is a 0/1
    call matrix per (card, bet size), with the forced showdown at s = 0.
    ``bets`` limits the sizes Player I may use (default: all of 0..b).
    """
    n, b = params.n, params.b
    allowed = sorted(set(range(b + 1) if bets is None else bets))
    Pm = check_newman_bettor(Pm, n, b)
    Qm = check_newman_caller(Qm, n, b)
    first, second = newman_card_values(params, Pm, Qm)
    total = Fraction(0)
    chosen = []
    for prow, vals in zip(Pm, first):
        cur = sum((p * v for p, v in zip(prow, vals)), Fraction(0))
        k, gain = _best([vals[s] for s in allowed], cur)
        total += gain
        chosen.append(allowed[k])
    gap1 = total / n
    total = Fraction(0)
    calls = []
    for qrow, vals in zip(Qm, second):
        row = [1]
        for s in range(1, b + 1):
            if s not in allowed:
                row.append(0)
                continue
            fold, call_ = vals[s]
            q = qrow[s]
            k, gain = _best((fold, call_), q * call_ + (1 - q) * fold)
            total += gain
            row.append(k)
        calls.append(tuple(row))
    gap2 = total / n
    return DeviationReport(
        (gap1, gap2),
        (tuple(chosen) if gap1 > 0 else None, tuple(calls) if gap2 > 0 else None),
    )


def epsilon_ne_three(params: GameParams, prof: ThreeStrategyProfile) -> DeviationReport:
    """Exact gaps of the three players against the other two strategies held fixed."""
    n = params.n
    prof = ThreeStrategyProfile(*(check_card_strategy(s, n) for s in prof))
    tables = three_card_values(params, prof)
    gaps, witnesses = [], []
    for strat, table in zip(prof, tables):
        total = Fraction(0)
        choice = []
        for x, (off, on) in zip(strat, table):
            k, gain = _best((off, on), x * on + (1 - x) * off)
            total += gain
            choice.append(k)
        gap = total / n
        gaps.append(gap)
        witnesses.append(tuple(choice) if gap > 0 else None)
    return DeviationReport(tuple(gaps), tuple(witnesses))


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass
class MonteCarloResult:
    estimates: Tuple[float, ...]
    std_errors: Tuple[float, ...]
    trials: int

    def z_score(self, expected: float, player: int = 0) -> float:
        se = self.std_errors[player]
        if se == 0:
            return 0.0 if self.estimates[player] == expected else float("inf")
        return (self.estimates[player] - expected) / se


_SHARD = 1_000_000


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    # Philox is counter based; jumping gives each shard its own stream, so the
    # result does not depend on how shards are scheduled.
    return np.random.Generator(np.random.Philox(key=seed).jumped(shard))


def _deal(rng, n, size, players):
    first = rng.integers(1, n + 1, size)
    second = rng.integers(1, n, size)
    second = second + (second >= first)
    if players == 2:
        return first, second
    third = rng.integers(1, n - 1, size)
    lo = np.minimum(first, second)
    hi = np.maximum(first, second)
    third = third + (third >= lo)
    third = third + (third >= hi)
    return first, second, third


def _sim_two(rng, size, params, strategies):
    P, Q = (np.array([float(x) for x in s]) for s in strategies)
    B = params.b + 1
    i, j = _deal(rng, params.n, size, 2)
    sign = np.where(i > j, 1.0, -1.0)
    bet = rng.random(size) < P[i - 1]
    called = rng.random(size) < Q[j - 1]
    g = np.where(bet, np.where(called, B * sign, 1.0), sign)
    return (g, -g)


def _sim_newman(rng, size, params, strategies):
    Pm, Qm = (np.array([[float(x) for x in row] for row in m]) for m in strategies)
    i, j = _deal(rng, params.n, size, 2)
    cdf = np.cumsum(Pm, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random(size)
    s = (u[:, None] >= cdf[i - 1]).sum(axis=1)
    called = rng.random(size) < Qm[j - 1, s]
    sign = np.where(i > j, 1.0, -1.0)
    g = np.where(called, (s + 1) * sign, 1.0)
    return (g, -g)


def _three_outcome(size, x, y, z, bet, call2, call3, B):
    top1 = (x > y) & (x > z)
    top2 = (y > x) & (y > z)
    top3 = ~top1 & ~top2
    show = [np.where(t, 2.0, -1.0) for t in (top1, top2, top3)]
    both = call2 & call3
    none = ~call2 & ~call3
    g1 = np.where(none, 2.0, 0.0)
    g2 = np.where(none, -1.0, 0.0)
    g3 = g2.copy()
    only2 = call2 & ~call3
    w = np.where(x > y, B + 1.0, -float(B))
    g1 = np.where(only2, w, g1)
    g2 = np.where(only2, 1.0 - w, g2)
    g3 = np.where(only2, -1.0, g3)
    only3 = call3 & ~call2
    w = np.where(x > z, B + 1.0, -float(B))
    g1 = np.where(only3, w, g1)
    g3 = np.where(only3, 1.0 - w, g3)
    g2 = np.where(only3, -1.0, g2)
    for idx, (g, t) in enumerate(((g1, top1), (g2, top2), (g3, top3))):
        g[both] = np.where(t, 2.0 * B, -float(B))[both]
    return tuple(np.where(bet, g, s) for g, s in zip((g1, g2, g3), show))


def _sim_three(rng, size, params, strategies):
    P, Q, R = (np.array([float(x) for x in s]) for s in strategies)
    i, j, k = _deal(rng, params.n, size, 3)
    bet = rng.random(size) < P[i - 1]
    c2 = rng.random(size) < Q[j - 1]
    c3 = rng.random(size) < R[k - 1]
    return _three_outcome(size, i, j, k, bet, c2, c3, params.b + 1)


def _sim_three_continuous(rng, size, params, cuts):
    A, Bc, C, b = (float(cuts.A), float(cuts.B), float(cuts.C), float(cuts.b))
    u = rng.random((3, size))
    x, y, z = u
    bet = (x < A) | (x > Bc)
    return _three_outcome(size, x, y, z, bet, y > C, z > C, b + 1.0)


_MODELS = {
    "two": _sim_two,
    "newman": _sim_newman,
    "three": _sim_three,
    "three_continuous": _sim_three_continuous,
}


def monte_carlo(model: str, strategies, trials: int, seed: int = 0, params: GameParams | None = None) -> MonteCarloResult:
    """Estimate every player's expected gain from ``trials`` simulated deals.

    ``strategies`` is ``(P, Q)`` for "two", ``(Pm, Qm)`` for "newman",
    ``(P, Q, R)`` for "three", and a cut-point record with fields A, B, C, b
    for "three_continuous" (``params`` is unused there).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    try:
        sim = _MODELS[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(_MODELS)}") from None
    if model != "three_continuous" and params is None:
        raise ValueError(f"model {model!r} needs GameParams")
    sums = None
    sq = None
    done = 0
    shard = 0
    while done < trials:
        size = min(_SHARD, trials - done)
        out = sim(_shard_rng(seed, shard), size, params, strategies)
        s = np.array([g.sum() for g in out])
        s2 = np.array([(g * g).sum() for g in out])
        sums = s if sums is None else sums + s
        sq = s2 if sq is None else sq + s2
        done += size
        shard += 1
    mean = sums / trials
    if trials > 1:
        var = np.maximum(sq / trials - mean * mean, 0.0) * trials / (trials - 1)
        se = np.sqrt(var / trials)
    else:
        se = np.full_like(mean, np.inf)
    return MonteCarloResult(tuple(float(m) for m in mean), tuple(float(e) for e in se), trials)
