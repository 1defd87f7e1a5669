"""Game parameters, strategy representations and exact payoff evaluators.

Cards are labelled ``1..n`` and dealt without replacement, so two players
never hold the same card.  Payoffs are net gains relative to the wealth
before the ante: a player who folds loses their one-dollar ante, a player
who wins a called bet of ``b`` gains ``b + 1`` from each caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, NamedTuple, Sequence, Tuple

from .exact_arith import format_rational, parse_rational, to_rational

__all__ = [
    "GameParams",
    "ThreeStrategyProfile",
    "call",
    "call2",
    "call3",
    "check_card_strategy",
    "check_subset",
    "check_newman_bettor",
    "check_newman_caller",
    "indicator",
    "payoff_pure",
    "payoff_bilinear",
    "bilinear_components",
    "payoff_newman",
    "payoff_three",
    "two_card_values",
    "newman_card_values",
    "three_card_values",
    "bettor_sums",
    "caller_sums",
    "strategy_to_json",
    "strategy_from_json",
]

CardStrategy = Tuple[Fraction, ...]
NewmanStrategy = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class GameParams:
    """Deck size ``n`` (cards 1..n) and integer bet size ``b``."""

    n: int
    b: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise ValueError(f"deck size n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.b, int) or isinstance(self.b, bool) or self.b < 1:
            raise ValueError(f"bet size b must be an integer >= 1, got {self.b!r}")

    @property
    def cards(self) -> range:
        return range(1, self.n + 1)


class ThreeStrategyProfile(NamedTuple):
    P: CardStrategy  # Player I bet probabilities
    Q: CardStrategy  # Player II call probabilities
    R: CardStrategy  # Player III call probabilities


def call(i: int, j: int, R) -> Fraction:
    """Showdown stake from the first player's point of view."""
    if i == j:
        raise ValueError(f"impossible deal: both players hold card {i}")
    R = to_rational(R)
    return R if i > j else -R


def call2(i: int, j: int, R) -> Fraction:
    """Two-way showdown in a three-player pot; the winner also takes the folder's ante."""
    if i == j:
        raise ValueError(f"impossible deal: both players hold card {i}")
    R = to_rational(R)
    return R + 1 if i > j else -R


def call3(i: int, j: int, k: int, R) -> Fraction:
    if i == j or i == k or j == k:
        raise ValueError(f"impossible deal: cards {i}, {j}, {k} are not distinct")
    R = to_rational(R)
    return 2 * R if (i > j and i > k) else -R


def check_card_strategy(probs: Iterable, n: int | None = None) -> CardStrategy:
    """Return ``probs`` as a tuple of Fractions, validating 0 <= p <= 1."""
    out = tuple(to_rational(p) for p in probs)
    if n is not None and len(out) != n:
        raise ValueError(f"strategy has {len(out)} entries, expected {n}")
    for k, p in enumerate(out, start=1):
        if not 0 <= p <= 1:
            raise ValueError(f"probability for card {k} is {p}, outside [0, 1]")
    return out


def check_subset(cards: Iterable[int], n: int) -> Tuple[int, ...]:
    out = tuple(sorted(set(int(c) for c in cards)))
    if out and (out[0] < 1 or out[-1] > n):
        raise ValueError(f"subset {set(out)} is not contained in 1..{n}")
    return out


def check_newman_bettor(rows, n: int, b: int) -> NewmanStrategy:
    out = tuple(check_card_strategy(r) for r in rows)
    if len(out) != n or any(len(r) != b + 1 for r in out):
        raise ValueError(f"bettor matrix must be {n} x {b + 1}")
    for k, r in enumerate(out, start=1):
        if sum(r) != 1:
            raise ValueError(f"bettor row for card {k} sums to {sum(r)}, not 1")
    return out


def check_newman_caller(rows, n: int, b: int) -> NewmanStrategy:
    out = tuple(check_card_strategy(r) for r in rows)
    if len(out) != n or any(len(r) != b + 1 for r in out):
        raise ValueError(f"caller matrix must be {n} x {b + 1}")
    for k, r in enumerate(out, start=1):
        if r[0] != 1:
            raise ValueError(f"caller row for card {k} must have q[0] = 1 (checking forces a showdown)")
    return out


def indicator(subset: Iterable[int], n: int) -> CardStrategy:
    s = set(subset)
    return tuple(Fraction(1) if c in s else Fraction(0) for c in range(1, n + 1))


def payoff_pure(params: GameParams, S1: Iterable[int], S2: Iterable[int]) -> Fraction:
    """Player I's expected gain when I bets iff his card is in S1 and II calls iff hers is in S2.

    Straight enumeration of the n(n-1) ordered deals.
    """
    n, b = params.n, params.b
    bet = set(check_subset(S1, n))
    calls = set(check_subset(S2, n))
    total = 0
    for i, j in permutations(range(1, n + 1), 2):
        if i not in bet:
            total += 1 if i > j else -1
        elif j not in calls:
            total += 1
        else:
            total += (b + 1) if i > j else -(b + 1)
    return Fraction(total, n * (n - 1))


def payoff_bilinear(params: GameParams, P: Sequence, Q: Sequence) -> Fraction:
    """Player I's expected gain for card-by-card strategies, as a bilinear form in P and Q."""
    n, b = params.n, params.b
    P = check_card_strategy(P, n)
    Q = check_card_strategy(Q, n)
    total = Fraction(0)
    for i in range(1, n + 1):
        p = P[i - 1]
        for j in range(1, n + 1):
            if j == i:
                continue
            q = Q[j - 1]
            sign = 1 if j < i else -1
            total += sign * (1 - p) + p * (1 - q) + sign * (b + 1) * p * q
    return total / (n * (n - 1))


def bilinear_components(params: GameParams):
    """Integer data ``(a, M)`` with n(n-1) * payoff = sum_i a_i p_i + sum_ij p_i M_ij q_j.

    The constant term vanishes because the pure showdown is symmetric.
    ``a`` and ``M`` are 0-indexed by card - 1.
    """
    n, b = params.n, params.b
    a = [2 * n - 2 * i for i in range(1, n + 1)]
    M = [[0 if i == j else (b if i > j else -(b + 2)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    return a, M


def payoff_newman(params: GameParams, Pm, Qm) -> Fraction:
    """Player I's expected gain in the variable-bet game.

    ``Pm[i-1][s]`` is the probability that Player I bets ``s`` holding card ``i``
    (``s = 0`` is a check); ``Qm[j-1][s]`` the probability that Player II calls
    a bet of ``s`` holding ``j``.
    """
    n, b = params.n, params.b
    Pm = check_newman_bettor(Pm, n, b)
    Qm = check_newman_caller(Qm, n, b)
    total = Fraction(0)
    for i, j in permutations(range(1, n + 1), 2):
        prow, qrow = Pm[i - 1], Qm[j - 1]
        for s in range(b + 1):
            p = prow[s]
            if p:
                q = qrow[s]
                total += p * (q * call(i, j, s + 1) + (1 - q))
    return total / (n * (n - 1))


def payoff_three(params: GameParams, prof: ThreeStrategyProfile) -> Tuple[Fraction, Fraction, Fraction]:
    """Expected gains (v1, v2, v3) by enumeration of the n(n-1)(n-2) ordered deals."""
    n, b = params.n, params.b
    if n < 3:
        raise ValueError("the three-player game needs n >= 3")
    P = check_card_strategy(prof.P, n)
    Q = check_card_strategy(prof.Q, n)
    R = check_card_strategy(prof.R, n)
    B = b + 1
    v = [Fraction(0), Fraction(0), Fraction(0)]
    for i, j, k in permutations(range(1, n + 1), 3):
        p, q, r = P[i - 1], Q[j - 1], R[k - 1]
        top = max(i, j, k)
        w1 = [0, 0, 0]
        # check: three-way showdown at stake 1
        if p != 1:
            c = 1 - p
            for idx, card in enumerate((i, j, k)):
                w1[idx] = 2 if card == top else -1
            for idx in range(3):
                v[idx] += c * w1[idx]
        if p == 0:
            continue
        both = q * r
        only2 = q * (1 - r)
        only3 = (1 - q) * r
        none = (1 - q) * (1 - r)
        g = [Fraction(0)] * 3
        if none:
            g[0] += 2 * none
            g[1] -= none
            g[2] -= none
        if only2:
            win = B + 1 if i > j else -B
            g[0] += only2 * win
            g[1] += only2 * (1 - win)
            g[2] -= only2
        if only3:
            win = B + 1 if i > k else -B
            g[0] += only3 * win
            g[2] += only3 * (1 - win)
            g[1] -= only3
        if both:
            for idx, card in enumerate((i, j, k)):
                g[idx] += both * (2 * B if card == top else -B)
        for idx in range(3):
            v[idx] += p * g[idx]
    d = n * (n - 1) * (n - 2)
    return v[0] / d, v[1] / d, v[2] / d


def two_card_values(params: GameParams, P: Sequence, Q: Sequence):
    """Per-card conditional payoffs, each averaged over the opponent's n-1 cards.

    Returns ``(first, second)``: ``first[i-1] = (check, bet)`` is Player I's gain
    holding ``i`` against ``Q``; ``second[j-1] = (fold, call)`` is Player II's
    gain holding ``j`` against ``P``.
    """
    n, B = params.n, params.b + 1
    first, second = [], []
    for i in range(1, n + 1):
        low = i - 1
        check = low - (n - i)
        bet = 0
        for j in range(1, n + 1):
            if j != i:
                q = Q[j - 1]
                bet += (B if i > j else -B) * q + (1 - q)
        first.append((Fraction(check, n - 1), bet / (n - 1)))
    for j in range(1, n + 1):
        fold = call_ = 0
        for i in range(1, n + 1):
            if i == j:
                continue
            p = P[i - 1]
            show = (1 if j > i else -1) * (1 - p)
            fold += show - p
            call_ += show + (B if j > i else -B) * p
        second.append((fold / (n - 1), call_ / (n - 1)))
    return first, second


def newman_card_values(params: GameParams, Pm, Qm):
    """Per-card conditional payoffs in the variable-bet game.

    ``first[i-1][s]`` is Player I's gain for betting ``s`` with card ``i``
    (averaged over Player II's cards).  ``second[j-1][s] = (fold, call)`` is
    Player II's total gain contribution, over Player I's cards, from facing a
    bet of ``s`` with card ``j``, divided by n-1.
    """
    n, b = params.n, params.b
    first, second = [], []
    for i in range(1, n + 1):
        row = []
        for s in range(b + 1):
            tot = 0
            for j in range(1, n + 1):
                if j != i:
                    q = Qm[j - 1][s]
                    tot += q * call(i, j, s + 1) + (1 - q)
            row.append(tot / (n - 1))
        first.append(row)
    for j in range(1, n + 1):
        row = []
        for s in range(b + 1):
            fold = call_ = 0
            for i in range(1, n + 1):
                if i != j:
                    p = Pm[i - 1][s]
                    fold -= p
                    call_ -= p * call(i, j, s + 1)
            row.append((fold / (n - 1), call_ / (n - 1)))
        second.append(row)
    return first, second


def caller_sums(n: int, B: int, j: int, P, other):
    """Undivided (fold, call) sums over the (n-1)(n-2) opponent deals for a caller holding ``j``.

    ``other`` is the remaining caller's strategy.  Stays in integers when the
    strategies are 0/1 vectors.
    """
    o_low = sum(other[k - 1] for k in range(1, j))
    o_high = sum(other[k - 1] for k in range(j + 1, n + 1))
    o_all = o_low + o_high
    fold = call_ = 0
    for i in range(1, n + 1):
        if i == j:
            continue
        p = P[i - 1]
        oi = other[i - 1]
        if i < j:
            show = 2 * (j - 2) - (n - j)
            three = 2 * B * (o_low - oi) - B * o_high
            two = B + 1
        else:
            show = -(n - 2)
            three = -B * (o_all - oi)
            two = -B
        fold += -(n - 2) * p + show * (1 - p)
        call_ += p * three + p * two * ((n - 2) - o_all + oi) + show * (1 - p)
    return fold, call_


def bettor_sums(n: int, B: int, Q, R):
    """Undivided (check, bet) sums for Player I, one pair per card."""
    qsum, rsum = sum(Q), sum(R)
    qrsum = sum(q * r for q, r in zip(Q, R))
    nfsum = sum((1 - q) * (1 - r) for q, r in zip(Q, R))
    out = []
    qL = rL = qrL = 0
    for i in range(1, n + 1):
        qi, ri = Q[i - 1], R[i - 1]
        qA, rA = qsum - qi, rsum - ri
        all_pairs = qA * rA - (qrsum - qi * ri)
        low_pairs = qL * rL - qrL
        t1 = 3 * B * low_pairs - B * all_pairs
        t2 = t3 = 0
        for j in range(1, n + 1):
            if j == i:
                continue
            w = B + 1 if i > j else -B
            t2 += w * Q[j - 1] * ((n - 2) - rA + R[j - 1])
            t3 += w * R[j - 1] * ((n - 2) - qA + Q[j - 1])
        t4 = 2 * (((n - 1) - qA) * ((n - 1) - rA) - (nfsum - (1 - qi) * (1 - ri)))
        check = 3 * (i - 1) * (i - 2) - (n - 1) * (n - 2)
        out.append((check, t1 + t2 + t3 + t4))
        qL += qi
        rL += ri
        qrL += qi * ri
    return out


def three_card_values(params: GameParams, prof: ThreeStrategyProfile):
    """Per-card conditional payoffs in the three-player game.

    Returns ``(first, second, third)`` with ``first[i-1] = (check, bet)`` for
    Player I and ``(fold, call)`` pairs for Players II and III, each averaged
    over the (n-1)(n-2) ordered deals of the opponents' cards.  The sums over
    opponent pairs are collapsed algebraically, so each card costs O(n).
    """
    n, B = params.n, params.b + 1
    if n < 3:
        raise ValueError("the three-player game needs n >= 3")
    P, Q, R = prof
    d = (n - 1) * (n - 2)

    def avg(pair):
        return tuple(Fraction(x) / d for x in pair)

    first = [avg(x) for x in bettor_sums(n, B, Q, R)]
    second = [avg(caller_sums(n, B, j, P, R)) for j in range(1, n + 1)]
    third = [avg(caller_sums(n, B, k, P, Q)) for k in range(1, n + 1)]
    return first, second, third


def strategy_to_json(probs) -> list:
    """Nested lists of "p/q" strings."""
    if isinstance(probs, (list, tuple)) and probs and isinstance(probs[0], (list, tuple)):
        return [strategy_to_json(r) for r in probs]
    return [format_rational(p) for p in probs]


def strategy_from_json(data) -> tuple:
    if data and isinstance(data[0], list):
        return tuple(strategy_from_json(r) for r in data)
    return tuple(parse_rational(s) if isinstance(s, str) else to_rational(s) for s in data)
