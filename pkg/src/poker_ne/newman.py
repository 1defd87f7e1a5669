"""Finite-deck Newman poker: Player I picks a bet size s in {0, ..., b}.

Player I's program has one constraint per (Player II card, call set Y),
where Y is the set of bet sizes she would call and always contains 0, so
there are n * 2^b of them.  Player II's program needs one constraint per
(Player I card, bet size).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_arith import format_rational, format_vector, to_decimal
from .game_model import GameParams, call, payoff_newman
from .lp_core import LinearProgram, solve_lp
from .mixed_ne import SolverError
from .verify import DeviationReport, epsilon_ne_newman

logger = logging.getLogger(__name__)

__all__ = [
    "NewmanSolution",
    "SaturationResult",
    "ConstraintLimitError",
    "enumerate_call_sets",
    "newman_mixed",
    "saturation_scan",
    "detect_saturation",
    "NEWMAN_LIMIT",
]

DEFAULT_CONSTRAINT_LIMIT = 10**6
NEWMAN_LIMIT = Fraction(1, 7)  # value of Newman's continuous game


class ConstraintLimitError(ValueError):
    pass


def enumerate_call_sets(b: int, bets: Sequence[int] | None = None) -> List[Tuple[int, ...]]:
    """All subsets of the bet sizes that contain 0, ordered by size then lexicographically."""
    if b < 1:
        raise ValueError("b must be >= 1")
    positive = [s for s in (range(1, b + 1) if bets is None else sorted(bets)) if s > 0]
    return [(0,) + c for size in range(len(positive) + 1) for c in combinations(positive, size)]


@dataclass
class NewmanSolution:
    params: GameParams
    value: Fraction
    p_matrix: Tuple[Tuple[Fraction, ...], ...]
    q_matrix: Tuple[Tuple[Fraction, ...], ...]
    bets: Tuple[int, ...]
    second_value: Fraction = None
    certificate: DeviationReport = field(repr=False, default=None)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.certified

    def __str__(self):
        P = "[" + ", ".join(format_vector(r) for r in self.p_matrix) + "]"
        Q = "[" + ", ".join(format_vector(r) for r in self.q_matrix) + "]"
        return f"[{format_rational(self.value)}, {to_decimal(self.value)}, {P}, {Q}]"


def _check_bets(b, bets):
    if bets is None:
        return tuple(range(b + 1))
    out = tuple(sorted(set(int(s) for s in bets)))
    if not out or out[0] != 0 or out[-1] > b:
        raise ValueError(f"allowed bets must contain 0 and lie in 0..{b}, got {bets}")
    return out


def bettor_program(params: GameParams, bets: Sequence[int] | None = None) -> LinearProgram:
    n, b = params.n, params.b
    bets = _check_bets(b, bets)
    w = Fraction(1, n - 1)
    cards = range(1, n + 1)
    lp = LinearProgram("max")
    for i in cards:
        for s in bets:
            lp.add_variable(f"p{i}_{s}", 0, None)
    for j in cards:
        lp.add_variable(f"v{j}", None, None, objective=Fraction(1, n))
    for j in cards:
        for Y in enumerate_call_sets(b, bets):
            Yset = set(Y)
            row = {f"v{j}": -1}
            for i in cards:
                if i == j:
                    continue
                for s in bets:
                    row[f"p{i}_{s}"] = (call(i, j, s + 1) if s in Yset else 1) * w
            lp.add_constraint(row, ">=", 0, name=f"II holds {j}, calls {Y}")
    for i in cards:
        lp.add_constraint({f"p{i}_{s}": 1 for s in bets}, "=", 1, name=f"row {i}")
    return lp


def caller_program(params: GameParams, bets: Sequence[int] | None = None) -> LinearProgram:
    n, b = params.n, params.b
    bets = _check_bets(b, bets)
    w = Fraction(1, n - 1)
    cards = range(1, n + 1)
    lp = LinearProgram("min")
    for j in cards:
        for s in bets:
            lp.add_variable(f"q{j}_{s}", 1 if s == 0 else 0, 1)
    for i in cards:
        lp.add_variable(f"v{i}", None, None, objective=Fraction(1, n))
    for i in cards:
        for s in bets:
            row = {f"q{j}_{s}": (call(i, j, s + 1) - 1) * w for j in cards if j != i}
            row[f"v{i}"] = -1
            lp.add_constraint(row, "<=", -1, name=f"I holds {i}, bets {s}")
    return lp


def newman_mixed(
    params: GameParams,
    bets: Sequence[int] | None = None,
    constraint_limit: int = DEFAULT_CONSTRAINT_LIMIT,
) -> NewmanSolution:
    """One mixed equilibrium with its exact value.

    ``bets`` restricts Player I to a subset of {0..b} (0 is mandatory);
    restricting to {0, b} recovers the fixed-bet game.
    """
    n, b = params.n, params.b
    bets = _check_bets(b, bets)
    n_cons = n * 2 ** (len(bets) - 1)
    if n_cons > constraint_limit:
        raise ConstraintLimitError(
            f"Player I's program would have {n_cons} constraints (limit {constraint_limit}); try a smaller b"
        )
    first = solve_lp(bettor_program(params, bets))
    second = solve_lp(caller_program(params, bets))
    if not (first.is_optimal and second.is_optimal):
        raise SolverError(f"Newman LPs for {params} not optimal: {first.status}/{second.status}")
    if first.value != second.value:
        raise SolverError(f"minimax mismatch for {params}: {first.value} != {second.value}")
    cards = range(1, n + 1)
    allowed = set(bets)
    zero = Fraction(0)
    P = tuple(tuple(first[f"p{i}_{s}"] if s in allowed else zero for s in range(b + 1)) for i in cards)
    Q = tuple(tuple(second[f"q{j}_{s}"] if s in allowed else zero for s in range(b + 1)) for j in cards)
    sol = NewmanSolution(params, first.value, P, Q, bets, second.value)
    sol.certificate = epsilon_ne_newman(params, P, Q, bets=bets)
    if payoff_newman(params, P, Q) != sol.value:
        raise SolverError("equilibrium payoff differs from the LP value")
    return sol


@dataclass
class SaturationResult:
    n: int
    values: Dict[int, Fraction]
    saturation_b: Optional[int]

    @property
    def limit_gap(self) -> float:
        """|value - 1/7| at the largest scanned bet, for trend reports."""
        return float(abs(self.values[max(self.values)] - NEWMAN_LIMIT))


def saturation_scan(n: int, b_max: int, constraint_limit: int = DEFAULT_CONSTRAINT_LIMIT) -> SaturationResult:
    """Exact value for b = 1..b_max and the least b after which the value no longer changes.

    A saturation point needs at least one larger scanned b confirming it, and
    the value must stay equal for every remaining b, not just the next one.
    """
    if b_max < 2:
        raise ValueError("b_max must be >= 2")
    values = {
        b: newman_mixed(GameParams(n, b), constraint_limit=constraint_limit).value for b in range(1, b_max + 1)
    }
    return SaturationResult(n, values, detect_saturation(values))


def detect_saturation(values: Dict[int, Fraction]) -> Optional[int]:
    """Least scanned b whose value every larger scanned b repeats; the largest b alone never qualifies."""
    bs = sorted(values)
    for k, b in enumerate(bs[:-1]):
        if all(values[b] == values[c] for c in bs[k + 1 :]):
            return b
    return None
