"""Mixed equilibria of the two-player fixed-bet game.

``vn_slow`` solves the matrix game over all subset strategies (exponential
in n).  ``vn_fast`` solves the two card-by-card programs: one over Player
I's bet probabilities, with a per-card value v_j for each of Player II's
cards, and one over Player II's call probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact_arith import format_rational, format_vector, to_decimal
from .game_model import GameParams, call, payoff_bilinear
from .lp_core import LinearProgram, solve_lp
from .verify import DeviationReport, epsilon_ne_two

__all__ = [
    "MatrixGameSolution",
    "MixedNESolution",
    "SlowMixedNE",
    "SolverError",
    "solve_matrix_game",
    "vn_slow",
    "vn_fast",
    "vn_fast_program",
    "vn_fast_scan",
]

SLOW_MAX_N = 7


class SolverError(RuntimeError):
    pass


@dataclass
class MatrixGameSolution:
    value: Fraction
    row_mixture: List[Fraction]
    col_mixture: List[Fraction]


def solve_matrix_game(entries: Sequence[Sequence], scale: int = 1) -> MatrixGameSolution:
    """Exact solution of the zero-sum game ``entries / scale`` (row player maximizes).

    Solves the primal (row player) and the dual (column player) programs
    separately and requires the two optima to agree.
    """
    rows, cols = len(entries), len(entries[0])
    primal = LinearProgram("max")
    for r in range(rows):
        primal.add_variable(f"x{r}", 0, None)
    primal.add_variable("v1", None, None, objective=1)
    for c in range(cols):
        primal.add_constraint([int(entries[r][c]) for r in range(rows)] + [-1], ">=", 0)
    primal.add_constraint([1] * rows + [0], "=", 1)

    dual = LinearProgram("min")
    for c in range(cols):
        dual.add_variable(f"y{c}", 0, None)
    dual.add_variable("v2", None, None, objective=1)
    for r in range(rows):
        dual.add_constraint([int(entries[r][c]) for c in range(cols)] + [-1], "<=", 0)
    dual.add_constraint([1] * cols + [0], "=", 1)

    ps, ds = solve_lp(primal), solve_lp(dual)
    if not (ps.is_optimal and ds.is_optimal):
        raise SolverError(f"matrix game LP not optimal: {ps.status}/{ds.status}")
    if ps.value != ds.value:
        raise SolverError(f"minimax mismatch: {ps.value} != {ds.value}")
    return MatrixGameSolution(
        ps.value / scale,
        [ps[f"x{r}"] for r in range(rows)],
        [ds[f"y{c}"] for c in range(cols)],
    )


@dataclass
class SlowMixedNE:
    row_mixture: Dict[Tuple[int, ...], Fraction]
    col_mixture: Dict[Tuple[int, ...], Fraction]
    value: Fraction

    def __str__(self):
        def mix(m):
            parts = ("[{" + ", ".join(map(str, s)) + "}, " + format_rational(p) + "]" for s, p in m.items())
            return "{" + ", ".join(parts) + "}"

        return f"[{mix(self.row_mixture)}, {mix(self.col_mixture)}, {format_rational(self.value)}]"


def vn_slow(params: GameParams, max_n: int = SLOW_MAX_N) -> SlowMixedNE:
    """Mixed equilibrium over all 2^n subset strategies of each player."""
    from .pure_ne import build_paytable

    if params.n > max_n:
        raise ValueError(
            f"the subset-strategy LP has 2^{params.n} variables per player (guard n <= {max_n}); use vn_fast"
        )
    table = build_paytable(params)
    E = table.block(0, table.shape[0])
    sol = solve_matrix_game(E.tolist(), scale=table.denominator)
    rows = {s: p for s, p in zip(table.row_strategies, sol.row_mixture) if p}
    cols = {s: q for s, q in zip(table.col_strategies, sol.col_mixture) if q}
    return SlowMixedNE(rows, cols, sol.value)


@dataclass
class MixedNESolution:
    params: GameParams
    value: Fraction
    p_strategy: Tuple[Fraction, ...]
    q_strategy: Tuple[Fraction, ...]
    card_values_first: Tuple[Fraction, ...]  # v_j, indexed by Player II's card
    card_values_second: Tuple[Fraction, ...]  # v_i, indexed by Player I's card
    certificate: DeviationReport = field(repr=False, default=None)

    @property
    def is_pure(self) -> bool:
        return all(x in (0, 1) for x in self.p_strategy + self.q_strategy)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.certified

    def __str__(self):
        return (
            f"[{format_rational(self.value)}, {to_decimal(self.value)}, "
            f"{format_vector(self.p_strategy)}, {format_vector(self.q_strategy)}]"
        )


def vn_fast_program(params: GameParams, player: int) -> LinearProgram:
    """The card-by-card LP for ``player`` 1 (maximize) or 2 (minimize).

    The 1/(n-1) averaging factor is kept in the rows so that each v is a
    conditional expectation.
    """
    n, B = params.n, params.b + 1
    w = Fraction(1, n - 1)
    cards = range(1, n + 1)
    if player == 1:
        lp = LinearProgram("max")
        for i in cards:
            lp.add_variable(f"p{i}", 0, 1)
        for j in cards:
            lp.add_variable(f"v{j}", None, None, objective=Fraction(1, n))
        for j in cards:
            show = sum(call(i, j, 1) for i in cards if i != j) * w
            calls = {f"p{i}": (call(i, j, B) - call(i, j, 1)) * w for i in cards if i != j}
            calls[f"v{j}"] = -1
            lp.add_constraint(calls, ">=", -show, name=f"II calls with {j}")
            folds = {f"p{i}": (1 - call(i, j, 1)) * w for i in cards if i != j}
            folds[f"v{j}"] = -1
            lp.add_constraint(folds, ">=", -show, name=f"II folds with {j}")
        return lp
    if player == 2:
        lp = LinearProgram("min")
        for j in cards:
            lp.add_variable(f"q{j}", 0, 1)
        for i in cards:
            lp.add_variable(f"v{i}", None, None, objective=Fraction(1, n))
        for i in cards:
            raise_ = {f"q{j}": (call(i, j, B) - 1) * w for j in cards if j != i}
            raise_[f"v{i}"] = -1
            lp.add_constraint(raise_, "<=", -1, name=f"I raises with {i}")
            show = sum(call(i, j, 1) for j in cards if j != i) * w
            lp.add_constraint({f"v{i}": -1}, "<=", -show, name=f"I checks with {i}")
        return lp
    raise ValueError("player must be 1 or 2")


def vn_fast(params: GameParams) -> MixedNESolution:
    """Solve both card-by-card programs; their optima must coincide."""
    n = params.n
    first = solve_lp(vn_fast_program(params, 1))
    second = solve_lp(vn_fast_program(params, 2))
    if not (first.is_optimal and second.is_optimal):
        raise SolverError(f"fast LP for {params} not optimal: {first.status}/{second.status}")
    if first.value != second.value:
        raise SolverError(f"minimax mismatch for {params}: {first.value} != {second.value}")
    cards = range(1, n + 1)
    P = tuple(first[f"p{i}"] for i in cards)
    Q = tuple(second[f"q{j}"] for j in cards)
    sol = MixedNESolution(
        params,
        first.value,
        P,
        Q,
        tuple(first[f"v{j}"] for j in cards),
        tuple(second[f"v{i}"] for i in cards),
        epsilon_ne_two(params, P, Q),
    )
    if payoff_bilinear(params, P, Q) != sol.value:
        raise SolverError("equilibrium payoff differs from the LP value")
    return sol


def vn_fast_scan(n_range: Iterable[int], b_range: Iterable[int]) -> Dict[Tuple[int, int], Fraction]:
    b_values = list(b_range)
    return {(n, b): vn_fast(GameParams(n, b)).value for n in n_range for b in b_values}
