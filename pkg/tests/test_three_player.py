from fractions import Fraction

import pytest

import oracles
from poker_ne.game_model import GameParams, ThreeStrategyProfile, payoff_three
from poker_ne.three_player import (
    NoEquilibriumFound,
    build_tensors,
    tensor_mixture_value,
    three_fast_ne,
    three_value_scan,
)
from poker_ne.verify import epsilon_ne_three

F = Fraction


def test_four_cards():
    sol = three_fast_ne(GameParams(4, 1))
    assert sol.values == (F(1, 24), F(-1, 48), F(-1, 48))
    assert sol.profile.P == (F(2, 3), 0, 0, 1)
    assert sol.profile.Q == (0, 0, F(1, 4), 1)
    assert str(sol) == "[[0, 1/24, -1/48, -1/48], [2/3, 0, 0, 1], [0, 0, 1/4, 1], [0, 0, 1/4, 1]]"
    assert sol.certified


def test_ten_cards():
    sol = three_fast_ne(GameParams(10, 2))
    assert sol.values == (F(106, 1125), F(-53, 1125), F(-53, 1125))
    assert sol.profile.P == (F(16, 19),) + (0,) * 8 + (1,)
    assert sol.profile.Q == (0,) * 6 + (F(3, 25), 1, 1, 1)
    assert sol.certified


@pytest.mark.parametrize("n,b", [(4, 1), (5, 1), (5, 2)])
def test_certificate_agrees_with_subset_search(n, b):
    sol = three_fast_ne(GameParams(n, b))
    assert oracles.best_subset_gaps_three(n, b, *sol.profile) == (0, 0, 0)


def test_tensor_oracle():
    params = GameParams(4, 1)
    sol = three_fast_ne(params)
    t = build_tensors(params)
    assert tensor_mixture_value(t, sol.profile) == sol.values
    prof = ThreeStrategyProfile((F(1, 2), 0, 1, 1), (0, F(1, 3), 1, 1), (1, 0, 0, F(1, 2)))
    assert tensor_mixture_value(t, prof) == payoff_three(params, prof)


def test_tensor_guard():
    with pytest.raises(ValueError):
        build_tensors(GameParams(9, 1))


def test_perturbed_profile_has_gap():
    sol = three_fast_ne(GameParams(4, 1))
    Q = (0, 0, F(1, 2), 1)
    rep = epsilon_ne_three(GameParams(4, 1), ThreeStrategyProfile(sol.profile.P, Q, sol.profile.R))
    assert max(rep.gaps) > 0


def test_corner_equilibrium():
    # both players strictly prefer pure actions at the boundary cards
    sol = three_fast_ne(GameParams(4, 2))
    assert sol.profile.P == (0, 0, 0, 1) and sol.profile.Q == (0, 0, 0, 1)
    assert sol.values == (0, 0, 0)
    assert sol.certified


def test_no_equilibrium_reports_best_candidate(monkeypatch):
    import poker_ne.three_player as tp

    monkeypatch.setattr(tp, "_structured_candidates", lambda params, corners=False: iter(()))
    with pytest.raises(NoEquilibriumFound) as info:
        three_fast_ne(GameParams(5, 2), fallback=False)
    assert info.value.best is not None
    assert max(info.value.gaps) > 0


def test_small_deck_rejected():
    with pytest.raises(ValueError):
        three_fast_ne(GameParams(3, 1))


def test_cuts_and_advice():
    sol = three_fast_ne(GameParams(10, 2))
    A, B, C = sol.cuts()
    assert A == float(F(16, 19) / 10)
    assert B == 0.9
    assert C == float(1 - (3 + F(3, 25)) / 10)
    text = "\n".join(sol.advice())
    assert "bet with probability 16/19" in text
    assert "call with probability 3/25" in text


def test_scan_records_failures(monkeypatch):
    import poker_ne.three_player as tp

    out = three_value_scan(range(5, 7), range(1, 3))
    assert out[5, 1].values[0] == F(3, 40)
    assert out[6, 2].values[0] == F(4, 45)
    monkeypatch.setattr(tp, "_structured_candidates", lambda params, corners=False: iter(()))
    short = tp._best_response_fallback
    monkeypatch.setattr(tp, "_best_response_fallback", lambda params, rounds=0: short(params, rounds=20))
    out = three_value_scan([5], [1])
    assert isinstance(out[5, 1], NoEquilibriumFound)
