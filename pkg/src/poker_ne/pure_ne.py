"""Pure Nash equilibria of the finite-deck fixed-bet game.

The vanilla search lets both players use any subset of cards; the
restricted search limits Player I to "check iff A <= i <= B" and Player II
to "call iff j >= C".  Payoffs are evaluated through the bilinear form with
all entries scaled by n(n-1), so the tables are exact integer arrays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, NamedTuple, Tuple

import numpy as np

from .game_model import GameParams, bilinear_components, payoff_pure

logger = logging.getLogger(__name__)

__all__ = [
    "PayTable",
    "PureNE",
    "TableSizeError",
    "build_paytable",
    "enumerate_pure_ne",
    "restricted_value_scan",
    "RestrictedValue",
    "is_pure_ne",
]

DEFAULT_MAX_TABLE_BITS = 13
_MATERIALIZE_BITS = 10
_BLOCK_ROWS = 256

Subset = Tuple[int, ...]


class TableSizeError(ValueError):
    pass


@dataclass(frozen=True)
class PureNE:
    S1: Subset  # Player I bets iff his card is in S1
    S2: Subset  # Player II calls iff her card is in S2
    value: Fraction

    def __str__(self):
        fmt = lambda s: "{" + ", ".join(map(str, s)) + "}"
        from .exact_arith import format_rational

        return f"{fmt(self.S1)} ; {fmt(self.S2)} ; {format_rational(self.value)}"


def all_subsets(n: int) -> List[Subset]:
    """Subsets of 1..n ordered by size, then lexicographically."""
    cards = range(1, n + 1)
    return [c for size in range(n + 1) for c in combinations(cards, size)]


def interval_strategies(n: int) -> List[Subset]:
    """Player I bet sets whose complement (the check region) is {A..B}, 1 <= A < B <= n."""
    out = []
    for A in range(1, n + 1):
        for B in range(A + 1, n + 1):
            out.append(tuple(range(1, A)) + tuple(range(B + 1, n + 1)))
    return out


def threshold_strategies(n: int) -> List[Subset]:
    """Player II call sets {C..n}, 1 <= C <= n."""
    return [tuple(range(C, n + 1)) for C in range(1, n + 1)]


def _indicators(strategies, n):
    X = np.zeros((len(strategies), n), dtype=np.int64)
    for r, s in enumerate(strategies):
        for c in s:
            X[r, c - 1] = 1
    return X


class PayTable:
    """Player I's expected gain for every (row, column) pair of subset strategies.

    Entries are stored implicitly: ``block`` computes rows on demand as
    integers scaled by ``denominator = n(n-1)``.  Large vanilla tables are
    never materialized as a whole.
    """

    def __init__(self, params: GameParams, row_strategies, col_strategies, restricted: bool):
        self.params = params
        self.restricted = restricted
        self.row_strategies: List[Subset] = list(row_strategies)
        self.col_strategies: List[Subset] = list(col_strategies)
        self.denominator = params.n * (params.n - 1)
        a, M = bilinear_components(params)
        self._a = np.array(a, dtype=np.int64)
        self._M = np.array(M, dtype=np.int64)
        self._X = _indicators(self.row_strategies, params.n)
        self._Y = _indicators(self.col_strategies, params.n)
        self._MY = self._M @ self._Y.T  # n x cols

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_strategies), len(self.col_strategies)

    def block(self, start: int, stop: int) -> np.ndarray:
        X = self._X[start:stop]
        return X @ self._MY + (X @ self._a)[:, None]

    def blocks(self) -> Iterator[Tuple[int, np.ndarray]]:
        rows = self.shape[0]
        for start in range(0, rows, _BLOCK_ROWS):
            yield start, self.block(start, min(start + _BLOCK_ROWS, rows))

    def entry(self, r: int, c: int) -> Fraction:
        x = self._X[r]
        return Fraction(int(x @ self._MY[:, c] + x @ self._a), self.denominator)

    @property
    def entries(self) -> List[List[Fraction]]:
        if not self.restricted and self.params.n > _MATERIALIZE_BITS:
            raise TableSizeError(
                f"refusing to materialize a 2^{self.params.n} x 2^{self.params.n} table; use blocks()"
            )
        full = self.block(0, self.shape[0])
        d = self.denominator
        return [[Fraction(int(v), d) for v in row] for row in full]

    def index(self, S1, S2) -> Tuple[int, int]:
        return self.row_strategies.index(tuple(sorted(S1))), self.col_strategies.index(tuple(sorted(S2)))


def build_paytable(
    params: GameParams, restricted: bool = False, max_table_bits: int = DEFAULT_MAX_TABLE_BITS
) -> PayTable:
    n = params.n
    if restricted:
        return PayTable(params, interval_strategies(n), threshold_strategies(n), True)
    if n > max_table_bits:
        raise TableSizeError(
            f"vanilla table for n={n} has 2^{n} x 2^{n} cells, above the 2^{max_table_bits} guard; "
            "use restricted=True (interval/threshold strategies) instead"
        )
    subsets = all_subsets(n)
    return PayTable(params, subsets, subsets, False)


def enumerate_pure_ne(table: PayTable) -> List[PureNE]:
    """All cells that are a column maximum for Player I and a row minimum for Player II.

    Ties count: every tied best response is kept.
    """
    rows, cols = table.shape
    colmax = np.full(cols, np.iinfo(np.int64).min, dtype=np.int64)
    rowmin = np.empty(rows, dtype=np.int64)
    for start, E in table.blocks():
        np.maximum(colmax, E.max(axis=0), out=colmax)
        rowmin[start : start + len(E)] = E.min(axis=1)
    found = []
    for start, E in table.blocks():
        hit = (E == colmax[None, :]) & (E == rowmin[start : start + len(E), None])
        for r, c in zip(*np.nonzero(hit)):
            found.append(
                PureNE(
                    table.row_strategies[start + r],
                    table.col_strategies[c],
                    Fraction(int(E[r, c]), table.denominator),
                )
            )
    found.sort(key=lambda ne: (ne.S1, ne.S2))
    return found


def is_pure_ne(params: GameParams, S1, S2, restricted: bool = False) -> bool:
    """Deviation check by direct enumeration of payoffs, independent of ``PayTable``.

    Vanilla mode uses the per-card decomposition (the best subset response
    picks each card's action independently); restricted mode tries every
    interval and threshold alternative.
    """
    from .game_model import indicator
    from .verify import epsilon_ne_two

    n = params.n
    if not restricted:
        rep = epsilon_ne_two(params, indicator(S1, n), indicator(S2, n))
        return rep.certified
    v = payoff_pure(params, S1, S2)
    if any(payoff_pure(params, alt, S2) > v for alt in interval_strategies(n)):
        return False
    return not any(payoff_pure(params, S1, alt) < v for alt in threshold_strategies(n))


class RestrictedValue(NamedTuple):
    n: int
    value: Fraction
    pure: bool  # False when no pure NE exists and value is the mixed value of the restricted game
    equilibria: Tuple[PureNE, ...] = ()


def restricted_value_scan(n_max: int, b: int, n_min: int = 2) -> List[RestrictedValue]:
    """Value of the interval/threshold-restricted game for n = n_min..n_max.

    When pure equilibria exist they must all share one value, which is the
    game value.  Some n (22, 23, 24 at b=2) have none; there the value is
    the exact mixed value of the same restricted matrix game.
    """
    from .mixed_ne import solve_matrix_game

    out = []
    for n in range(n_min, n_max + 1):
        table = build_paytable(GameParams(n, b), restricted=True)
        found = enumerate_pure_ne(table)
        if found:
            values = {ne.value for ne in found}
            if len(values) != 1:
                raise AssertionError(f"n={n}: restricted equilibria disagree on the value: {values}")
            out.append(RestrictedValue(n, values.pop(), True, tuple(found)))
            continue
        logger.info("n=%d b=%d: no restricted pure NE, solving the restricted matrix game", n, b)
        full = table.block(0, table.shape[0]).tolist()
        out.append(RestrictedValue(n, solve_matrix_game(full, table.denominator).value, False))
    return out
