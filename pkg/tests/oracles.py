"""Slow reference implementations written straight from the betting rules.

Nothing here imports the package's payoff code, so agreement with it is an
independent check.
"""

from fractions import Fraction
from itertools import combinations, permutations


def deal_two(i, j, b, bets, calls):
    """Player I's gain for one two-player deal (ante 1 each)."""
    if not bets:
        return 1 if i > j else -1
    if not calls:
        return 1
    return (b + 1) if i > j else -(b + 1)


def value_two(n, b, P, Q):
    """Exact expected gain of Player I for per-card bet/call probabilities."""
    total = Fraction(0)
    for i, j in permutations(range(1, n + 1), 2):
        p, q = Fraction(P[i - 1]), Fraction(Q[j - 1])
        total += (1 - p) * deal_two(i, j, b, False, False)
        total += p * (q * deal_two(i, j, b, True, True) + (1 - q) * deal_two(i, j, b, True, False))
    return total / (n * (n - 1))


def value_newman(n, b, Pm, Qm):
    total = Fraction(0)
    for i, j in permutations(range(1, n + 1), 2):
        sign = 1 if i > j else -1
        for s in range(b + 1):
            p = Fraction(Pm[i - 1][s])
            if not p:
                continue
            if s == 0:
                total += p * sign
            else:
                q = Fraction(Qm[j - 1][s])
                total += p * (q * sign * (s + 1) + (1 - q))
    return total / (n * (n - 1))


def deal_three(cards, b, bets, call2, call3):
    """Gains of (I, II, III) for one three-player deal."""
    x, y, z = cards
    stake = b + 1
    if not bets:
        top = max(cards)
        return tuple(2 if c == top else -1 for c in cards)
    if not call2 and not call3:
        return (2, -1, -1)
    if call2 and call3:
        top = max(cards)
        return tuple(2 * stake if c == top else -stake for c in cards)
    # one caller: showdown against Player I, the folder loses the ante
    if call2:
        return (stake + 1, -stake, -1) if x > y else (-stake, stake + 1, -1)
    return (stake + 1, -1, -stake) if x > z else (-stake, -1, stake + 1)


def value_three(n, b, P, Q, R):
    tot = [Fraction(0)] * 3
    for x, y, z in permutations(range(1, n + 1), 3):
        p, q, r = Fraction(P[x - 1]), Fraction(Q[y - 1]), Fraction(R[z - 1])
        outcomes = [((1 - p), deal_three((x, y, z), b, False, False, False))]
        for c2 in (0, 1):
            for c3 in (0, 1):
                w = p * (q if c2 else 1 - q) * (r if c3 else 1 - r)
                outcomes.append((w, deal_three((x, y, z), b, True, bool(c2), bool(c3))))
        for w, g in outcomes:
            for k in range(3):
                tot[k] += w * g[k]
    d = n * (n - 1) * (n - 2)
    return tuple(t / d for t in tot)


def subsets(n):
    cards = range(1, n + 1)
    return [c for size in range(n + 1) for c in combinations(cards, size)]


def indicator(S, n):
    return [Fraction(int(c in S)) for c in range(1, n + 1)]


def best_subset_gaps_two(n, b, P, Q):
    """Deviation gaps found by trying every subset as a pure deviation."""
    v = value_two(n, b, P, Q)
    best1 = max(value_two(n, b, indicator(S, n), Q) for S in subsets(n))
    best2 = min(value_two(n, b, P, indicator(S, n)) for S in subsets(n))
    return best1 - v, v - best2


def best_subset_gaps_three(n, b, P, Q, R):
    v = value_three(n, b, P, Q, R)
    g1 = max(value_three(n, b, indicator(S, n), Q, R)[0] for S in subsets(n)) - v[0]
    g2 = max(value_three(n, b, P, indicator(S, n), R)[1] for S in subsets(n)) - v[1]
    g3 = max(value_three(n, b, P, Q, indicator(S, n))[2] for S in subsets(n)) - v[2]
    return g1, g2, g3


def three_card_literal(n, b, P, Q, R):
    """Per-card (check, bet) for I and (fold, call) for II, summing deals one by one."""
    D = (n - 1) * (n - 2)
    first = []
    for i in range(1, n + 1):
        chk = bet = Fraction(0)
        for j, k in permutations([c for c in range(1, n + 1) if c != i], 2):
            q, r = Fraction(Q[j - 1]), Fraction(R[k - 1])
            chk += deal_three((i, j, k), b, False, False, False)[0]
            for c2 in (0, 1):
                for c3 in (0, 1):
                    w = (q if c2 else 1 - q) * (r if c3 else 1 - r)
                    bet += w * deal_three((i, j, k), b, True, bool(c2), bool(c3))[0]
        first.append((chk / D, bet / D))
    second = []
    for j in range(1, n + 1):
        fold = cal = Fraction(0)
        for i, k in permutations([c for c in range(1, n + 1) if c != j], 2):
            p, r = Fraction(P[i - 1]), Fraction(R[k - 1])
            for c3 in (0, 1):
                w = r if c3 else 1 - r
                fold += (1 - p) * w * deal_three((i, j, k), b, False, False, False)[1]
                cal += (1 - p) * w * deal_three((i, j, k), b, False, False, False)[1]
                fold += p * w * deal_three((i, j, k), b, True, False, bool(c3))[1]
                cal += p * w * deal_three((i, j, k), b, True, True, bool(c3))[1]
        second.append((fold / D, cal / D))
    return first, second
