from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from poker_ne.game_model import (
    GameParams,
    ThreeStrategyProfile,
    call,
    call2,
    call3,
    check_card_strategy,
    check_newman_bettor,
    check_newman_caller,
    check_subset,
    indicator,
    newman_card_values,
    payoff_bilinear,
    payoff_newman,
    payoff_pure,
    payoff_three,
    strategy_from_json,
    strategy_to_json,
    three_card_values,
    two_card_values,
)

probs = st.fractions(min_value=0, max_value=1, max_denominator=6)


def card_strategy(n):
    return st.lists(probs, min_size=n, max_size=n)


def test_params_validation():
    with pytest.raises(ValueError):
        GameParams(1, 2)
    with pytest.raises(ValueError):
        GameParams(5, 0)
    with pytest.raises(ValueError):
        GameParams(5.0, 2)


def test_stakes():
    assert call(3, 1, 3) == 3 and call(1, 3, 3) == -3
    assert call2(5, 2, 3) == 4 and call2(2, 5, 3) == -3
    assert call3(7, 2, 5, 3) == 6 and call3(2, 7, 5, 3) == -3
    for fn, args in ((call, (2, 2, 1)), (call2, (4, 4, 1)), (call3, (1, 2, 1, 1))):
        with pytest.raises(ValueError):
            fn(*args)


def test_strategy_validation():
    with pytest.raises(ValueError):
        check_card_strategy([Fraction(3, 2)])
    with pytest.raises(ValueError):
        check_card_strategy([0, 1], n=3)
    with pytest.raises(ValueError):
        check_subset([0, 2], 3)
    with pytest.raises(ValueError):
        check_newman_bettor([[Fraction(1, 2), 0]], 1, 1)
    with pytest.raises(ValueError):
        check_newman_caller([[0, 1]], 1, 1)


def test_pure_payoff_examples():
    # n=2: Player I never bets, Player II's rule is irrelevant
    assert payoff_pure(GameParams(2, 2), [], [2]) == 0
    # hand-enumerated n=3 deal table
    assert payoff_pure(GameParams(3, 2), [1, 3], [2, 3]) == Fraction(-1, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("b", [1, 2, 3])
def test_bilinear_equals_subset_payoff_exhaustively(n, b):
    params = GameParams(n, b)
    subsets = oracles.subsets(n)
    for S1, S2 in product(subsets, subsets):
        v = payoff_pure(params, S1, S2)
        assert v == payoff_bilinear(params, indicator(S1, n), indicator(S2, n))
        assert v == oracles.value_two(n, b, indicator(S1, n), indicator(S2, n))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), card_strategy(n), card_strategy(n))), st.integers(1, 4))
def test_bilinear_matches_rules_for_mixed(npq, b):
    n, P, Q = npq
    assert payoff_bilinear(GameParams(n, b), P, Q) == oracles.value_two(n, b, P, Q)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), card_strategy(n), card_strategy(n))), st.integers(1, 4))
def test_two_card_values_average_to_payoff(npq, b):
    n, P, Q = npq
    params = GameParams(n, b)
    first, second = two_card_values(params, P, Q)
    v1 = sum(p * bet + (1 - p) * chk for p, (chk, bet) in zip(P, first)) / n
    v2 = sum(q * cl + (1 - q) * fo for q, (fo, cl) in zip(Q, second)) / n
    v = payoff_bilinear(params, P, Q)
    assert v1 == v
    assert v2 == -v


def _newman_strats(draw, n, b):
    Pm, Qm = [], []
    for _ in range(n):
        w = [draw(st.integers(0, 3)) for _ in range(b + 1)]
        if not any(w):
            w[0] = 1
        Pm.append([Fraction(x, sum(w)) for x in w])
        Qm.append([Fraction(1)] + [draw(probs) for _ in range(b)])
    return Pm, Qm


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_newman_payoff_and_card_values(data):
    n, b = data.draw(st.integers(2, 5)), data.draw(st.integers(1, 3))
    Pm, Qm = _newman_strats(data.draw, n, b)
    params = GameParams(n, b)
    v = payoff_newman(params, Pm, Qm)
    assert v == oracles.value_newman(n, b, Pm, Qm)
    first, second = newman_card_values(params, Pm, Qm)
    assert sum(sum(p * x for p, x in zip(prow, row)) for prow, row in zip(Pm, first)) / n == v


def test_newman_reduces_to_fixed_bet():
    n, b = 5, 2
    P = [Fraction(1, 3), 0, 0, Fraction(1, 2), 1]
    Q = [0, Fraction(1, 4), Fraction(1, 2), 1, 1]
    Pm = [[1 - p, 0, p] for p in P]
    Qm = [[1, 0, q] for q in Q]
    assert payoff_newman(GameParams(n, b), Pm, Qm) == payoff_bilinear(GameParams(n, b), P, Q)


def three_profile(n):
    return st.tuples(card_strategy(n), card_strategy(n), card_strategy(n))


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 5).flatmap(lambda n: st.tuples(st.just(n), three_profile(n))), st.integers(1, 3))
def test_three_player_zero_sum_and_rules(nprof, b):
    n, (P, Q, R) = nprof
    v = payoff_three(GameParams(n, b), ThreeStrategyProfile(P, Q, R))
    assert sum(v) == 0
    assert v == oracles.value_three(n, b, P, Q, R)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 6).flatmap(lambda n: st.tuples(st.just(n), three_profile(n))), st.integers(1, 3))
def test_three_card_values_match_deal_by_deal_sums(nprof, b):
    n, (P, Q, R) = nprof
    first, second, third = three_card_values(GameParams(n, b), ThreeStrategyProfile(P, Q, R))
    lit_first, lit_second = oracles.three_card_literal(n, b, P, Q, R)
    assert first == lit_first
    assert second == lit_second
    # Player III is Player II with the two callers swapped
    assert third == oracles.three_card_literal(n, b, P, R, Q)[1]


def test_json_round_trip():
    m = ((Fraction(1, 3), Fraction(2, 3)), (1, 0))
    assert strategy_from_json(strategy_to_json(m)) == ((Fraction(1, 3), Fraction(2, 3)), (1, 0))
    assert strategy_to_json([Fraction(14, 23), 1]) == ["14/23", "1"]
