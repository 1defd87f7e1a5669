"""scikit-learn style wrappers around the solvers.

Each estimator is configured by its constructor (deck size, bet size, solver
options), ``fit`` solves the game, and the fitted strategy is queried per card
with ``predict_proba`` (probability of each action) or ``predict`` (most
likely action).  ``X`` holds card values: integers 1..n for finite decks,
reals in (0, 1) for the continuous games.  ``fit`` ignores its arguments;
they exist so the objects compose with sklearn tooling.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .continuous import three_continuous, vn_continuous
from .game_model import GameParams
from .mixed_ne import vn_fast, vn_slow
from .newman import newman_mixed
from .pure_ne import build_paytable, enumerate_pure_ne
from .three_player import three_fast_ne

__all__ = [
    "check_game_params",
    "check_cards",
    "check_player",
    "VonNeumannPoker",
    "NewmanPoker",
    "ThreePlayerPoker",
    "ContinuousPoker",
]


def check_game_params(n, b, min_n: int = 2) -> GameParams:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"deck size must be an integer, got {n!r}")
    if isinstance(b, bool) or not isinstance(b, (int, np.integer)):
        raise TypeError(f"bet size must be an integer, got {b!r}")
    if n < min_n:
        raise ValueError(f"deck size must be >= {min_n}, got {n}")
    return GameParams(int(n), int(b))


def check_cards(X, n: int | None = None) -> np.ndarray:
    """Flatten ``X`` to a 1-d card array; integer cards in 1..n when ``n`` is given, else reals in [0, 1]."""
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array of cards (or one column), got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("no cards given")
    if n is None:
        arr = arr.astype(float)
        if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 1:
            raise ValueError("continuous cards must lie in [0, 1]")
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("finite-deck cards must be integers")
        arr = arr.astype(np.int64)
    if arr.min() < 1 or arr.max() > n:
        raise ValueError(f"cards must lie in 1..{n}")
    return arr


def check_player(player, players: int = 2) -> int:
    if player not in range(1, players + 1):
        raise ValueError(f"player must be in 1..{players}, got {player!r}")
    return player


def _two_action_proba(strategy, cards):
    p = np.array([float(strategy[c - 1]) for c in cards])
    return np.column_stack([1 - p, p])


class _FiniteMixin:
    def score(self, X=None, y=None) -> float:
        """Player I's equilibrium value."""
        check_is_fitted(self, "value_")
        return float(self.value_)

    def predict(self, X, player: int = 1) -> np.ndarray:
        return self.predict_proba(X, player).argmax(axis=1)


class VonNeumannPoker(_FiniteMixin, BaseEstimator):
    """Two-player fixed-bet poker on a deck of ``n`` cards.

    ``method`` is "fast" (per-card LPs), "slow" (subset-strategy LP, small n)
    or "pure" (pure-equilibrium enumeration; ``restricted`` switches to
    interval/threshold strategies).  Action columns are (check, bet) for
    Player I and (fold, call) for Player II.
    """

    def __init__(self, n=3, b=1, method="fast", restricted=False):
        self.n = n
        self.b = b
        self.method = method
        self.restricted = restricted

    def fit(self, X=None, y=None):
        params = check_game_params(self.n, self.b)
        if self.method == "fast":
            sol = vn_fast(params)
            self.strategies_ = (sol.p_strategy, sol.q_strategy)
            self.certificate_ = sol.certificate
            self.solution_ = sol
        elif self.method == "slow":
            sol = vn_slow(params)
            self.strategies_ = tuple(_mixture_to_cards(m, params.n) for m in (sol.row_mixture, sol.col_mixture))
            self.solution_ = sol
        elif self.method == "pure":
            found = enumerate_pure_ne(build_paytable(params, restricted=self.restricted))
            self.equilibria_ = found
            if not found:
                self.value_ = None
                self.strategies_ = None
                return self
            first = found[0]
            self.strategies_ = tuple(
                tuple(Fraction(int(c in s)) for c in range(1, params.n + 1)) for s in (first.S1, first.S2)
            )
            self.solution_ = first
        else:
            raise ValueError(f"method must be 'fast', 'slow' or 'pure', got {self.method!r}")
        self.value_ = self.solution_.value
        return self

    def predict_proba(self, X, player: int = 1) -> np.ndarray:
        check_is_fitted(self, "strategies_")
        if self.strategies_ is None:
            raise ValueError("no pure equilibrium exists for this game; nothing to predict")
        player = check_player(player)
        return _two_action_proba(self.strategies_[player - 1], check_cards(X, self.n))


def _mixture_to_cards(mixture, n):
    """Per-card action probabilities implied by a mixture over subsets."""
    out = [Fraction(0)] * n
    for subset, p in mixture.items():
        for c in subset:
            out[c - 1] += p
    return tuple(out)


class NewmanPoker(_FiniteMixin, BaseEstimator):
    """Variable-bet poker: Player I bets any s in 0..b (0 means check).

    Player I's ``predict_proba`` columns are bet sizes 0..b.  Player II's
    takes pairs (card, bet size) in ``X`` and returns (fold, call) columns.
    """

    def __init__(self, n=3, b=2, bets=None):
        self.n = n
        self.b = b
        self.bets = bets

    def fit(self, X=None, y=None):
        params = check_game_params(self.n, self.b)
        sol = newman_mixed(params, bets=self.bets)
        self.solution_ = sol
        self.value_ = sol.value
        self.certificate_ = sol.certificate
        self.bettor_ = np.array([[float(x) for x in row] for row in sol.p_matrix])
        self.caller_ = np.array([[float(x) for x in row] for row in sol.q_matrix])
        return self

    def predict_proba(self, X, player: int = 1) -> np.ndarray:
        check_is_fitted(self, "bettor_")
        player = check_player(player)
        if player == 1:
            return self.bettor_[check_cards(X, self.n) - 1]
        arr = np.asarray(X)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("Player II queries need rows of (card, bet size)")
        cards = check_cards(arr[:, 0], self.n)
        sizes = arr[:, 1].astype(np.int64)
        if sizes.min() < 0 or sizes.max() > self.b:
            raise ValueError(f"bet sizes must lie in 0..{self.b}")
        p = self.caller_[cards - 1, sizes]
        return np.column_stack([1 - p, p])


class ThreePlayerPoker(_FiniteMixin, BaseEstimator):
    """Three-player fixed-bet poker; Players II and III share one (fold, call) strategy."""

    def __init__(self, n=4, b=1, fallback=True):
        self.n = n
        self.b = b
        self.fallback = fallback

    def fit(self, X=None, y=None):
        params = check_game_params(self.n, self.b, min_n=4)
        sol = three_fast_ne(params, fallback=self.fallback)
        self.solution_ = sol
        self.values_ = sol.values
        self.value_ = sol.values[0]
        self.certificate_ = sol.certificate
        self.strategies_ = tuple(sol.profile)
        return self

    def predict_proba(self, X, player: int = 1) -> np.ndarray:
        check_is_fitted(self, "strategies_")
        player = check_player(player, 3)
        return _two_action_proba(self.strategies_[player - 1], check_cards(X, self.n))


class ContinuousPoker(BaseEstimator):
    """Infinite-deck game with cut points; ``players`` is 2 or 3. Cards are reals in (0, 1)."""

    def __init__(self, b=2.0, players=2):
        self.b = b
        self.players = players

    def fit(self, X=None, y=None):
        if self.players == 2:
            self.cuts_ = vn_continuous(self.b)
        elif self.players == 3:
            self.cuts_ = three_continuous(self.b)
        else:
            raise ValueError(f"players must be 2 or 3, got {self.players!r}")
        self.value_ = self.cuts_.value
        return self

    def predict_proba(self, X, player: int = 1) -> np.ndarray:
        check_is_fitted(self, "cuts_")
        player = check_player(player, self.players)
        x = check_cards(X)
        A, B, C = (float(v) for v in (self.cuts_.A, self.cuts_.B, self.cuts_.C))
        act = ((x < A) | (x > B)) if player == 1 else (x > C)
        act = act.astype(float)
        return np.column_stack([1 - act, act])

    def predict(self, X, player: int = 1) -> np.ndarray:
        return self.predict_proba(X, player).argmax(axis=1)

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "value_")
        return float(self.value_)
