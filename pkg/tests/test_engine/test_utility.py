import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from celloffset.engine import (
    UNCONDITIONED,
    ScenarioUtilities,
    UtilityTable,
    c_cc_two_user,
    c_multi,
    c_wc_two_user,
    c_ww,
    conditional_utility,
    erlang_interference_expectation,
    interference_mixture,
    state_probability,
    unconditional_utility,
)
from celloffset.errors import EmptyConditioningError, ParameterError
from celloffset.model import Policy, SystemParams, make_user_profile, symmetric_scenario, two_user_scenario

SYS = SystemParams()
USER = make_user_profile(0.6, 0.5, 1.0)


def test_ww_utility_has_closed_form():
    # E log(1 + h) for h ~ Exp(lam) is exp(lam) E1(lam)
    expected = math.exp(0.6) * special.exp1(0.6)
    assert unconditional_utility(Policy.WW, USER, USER, SYS) == pytest.approx(expected, abs=1e-8)
    assert unconditional_utility((0, 0), USER, None, SYS) == pytest.approx(expected, abs=1e-8)
    assert expected == pytest.approx(0.828, abs=1e-3)


def test_c_ww_and_zero_power():
    assert c_ww(1.0, SYS) == pytest.approx(math.log(2.0))
    assert c_ww(0.0, SYS) == 0.0
    assert c_ww(3.0, SystemParams(p=0.0)) == 0.0
    with pytest.raises(ParameterError):
        c_ww(-1.0, SYS)


def test_erlang_expectation_without_interferers():
    assert erlang_interference_expectation(2.0, 0, 1.0, 0.6, SYS) == pytest.approx(math.log1p(1.0))
    with pytest.raises(ParameterError):
        erlang_interference_expectation(1.0, 1.5, 0.0, 0.6, SYS)


@given(h=st.floats(0.0, 20.0))
@settings(max_examples=30, deadline=None)
def test_two_user_c_functions_are_ordered(h):
    opp = make_user_profile(1.2, 0.5, 1.0)
    cc = c_cc_two_user(h, opp, SYS)
    wc = c_wc_two_user(h, opp, SYS)
    ww = c_ww(h, SYS)
    assert cc <= wc + 1e-12
    assert wc <= ww + 1e-12


def test_interference_mixture_is_a_distribution():
    weights = interference_mixture(3, 4, USER)
    assert sum(weights.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(v <= m for m, v in weights)
    assert interference_mixture(0, 0, USER) == {(0, 0): 1.0}


def test_c_multi_decreases_with_more_cc_opponents():
    values = [c_multi(1.5, k1, 2, USER, SYS) for k1 in range(5)]
    assert values == sorted(values, reverse=True)
    assert c_multi(1.5, 0, 0, USER, SYS) == pytest.approx(c_ww(1.5, SYS))


def test_state_probability():
    assert state_probability(USER, 1) == pytest.approx(math.exp(-0.6))
    assert state_probability(USER, 0) == pytest.approx(1.0 - math.exp(-0.6))
    assert state_probability(USER, UNCONDITIONED) == 1.0
    with pytest.raises(ParameterError):
        state_probability(USER, 2)


@pytest.mark.parametrize("descriptor", [(0, 0), (2, 0), (0, 3), (2, 3), (5, 1)])
def test_good_state_beats_bad_state(descriptor):
    bad = conditional_utility(descriptor, 0, USER, sys=SYS)
    good = conditional_utility(descriptor, 1, USER, sys=SYS)
    whole = unconditional_utility(descriptor, USER, sys=SYS)
    assert bad < whole < good
    # law of total expectation over the two states
    alpha = USER.alpha
    assert alpha * good + (1 - alpha) * bad == pytest.approx(whole, abs=1e-7)


@pytest.mark.parametrize("k1,k2", [(1, 0), (3, 2), (0, 4)])
def test_utilities_decrease_in_opponent_counts(k1, k2):
    for state in (0, 1):
        base = conditional_utility((k1, k2), state, USER, sys=SYS)
        assert conditional_utility((k1 + 1, k2), state, USER, sys=SYS) < base
        assert conditional_utility((k1, k2 + 1), state, USER, sys=SYS) < base
        assert conditional_utility((k1 + 1, k2), state, USER, sys=SYS) <= conditional_utility(
            (k1, k2 + 1), state, USER, sys=SYS
        )


@pytest.mark.parametrize(
    "descriptor,state",
    [((0, 0), 1), ((2, 3), 0), ((4, 1), 1), ((1, 2), UNCONDITIONED), (Policy.CC, 0), (Policy.WC, 1)],
)
def test_transform_agrees_with_nested_integration(descriptor, state):
    opp = make_user_profile(1.2, 0.5, 0.8) if isinstance(descriptor, Policy) else None
    kwargs = dict(opponents=opp, sys=SYS, tol=1e-8)
    if state == UNCONDITIONED:
        fast = unconditional_utility(descriptor, USER, method="transform", **kwargs)
        slow = unconditional_utility(descriptor, USER, method="nested", **kwargs)
    else:
        fast = conditional_utility(descriptor, state, USER, method="transform", **kwargs)
        slow = conditional_utility(descriptor, state, USER, method="nested", **kwargs)
    assert fast == pytest.approx(slow, abs=1e-5)


def test_empty_bad_state_is_reported():
    with pytest.raises(EmptyConditioningError):
        conditional_utility((1, 1), 0, USER.with_psi(0.0), sys=SYS)


def test_unknown_method_and_descriptor_are_rejected():
    with pytest.raises(ParameterError):
        conditional_utility((1, 1), 1, USER, sys=SYS, method="simpson")
    with pytest.raises(ParameterError):
        conditional_utility((1, -1), 1, USER, sys=SYS)
    with pytest.raises(ParameterError):
        conditional_utility((1, 1), 2, USER, sys=SYS)


def test_zero_power_gives_zero_utility():
    assert conditional_utility((2, 2), 1, USER, sys=SystemParams(p=0.0)) == 0.0


def test_table_memoizes_values():
    table = UtilityTable(1e-9)
    first = conditional_utility((2, 1), 1, USER, sys=SYS, table=table)
    second = conditional_utility((2, 1), 1, USER, sys=SYS, table=table)
    assert first == second
    assert (table.hits, table.misses, len(table)) == (1, 1, 1)
    conditional_utility((2, 1), 0, USER, sys=SYS, table=table)
    assert len(table) == 2
    assert "entries=2" in repr(table)


def test_scenario_utilities_vacuous_state():
    utilities = ScenarioUtilities(symmetric_scenario(psi=0.0))
    assert utilities.value((1, 0), 0) is None
    assert utilities.value((1, 0), 1) is not None
    assert utilities.value((1, 0), UNCONDITIONED) == pytest.approx(utilities.value((1, 0), 1))


def test_scenario_utilities_checks_descriptor_kind():
    symmetric = ScenarioUtilities(symmetric_scenario(n=4))
    two_user = ScenarioUtilities(two_user_scenario([(0.6, 0.5, 1.0), (1.2, 0.5, 1.0)]))
    with pytest.raises(ParameterError):
        symmetric.value(Policy.CC, 1)
    with pytest.raises(ParameterError):
        two_user.value((1, 0), 1)


def test_scenario_utilities_player_perspective():
    scenario = two_user_scenario([(0.6, 0.5, 1.0), (1.2, 0.5, 1.0)])
    utilities = ScenarioUtilities(scenario)
    own, opp = utilities.profiles(player=1)
    assert own.lam == 1.2 and opp.lam == 0.6
    expected = conditional_utility(Policy.CC, 1, own, opp, scenario.system, scenario.quad_tol)
    assert utilities.value(Policy.CC, 1, player=1) == pytest.approx(expected)
    shifted, _ = utilities.profiles(player=0, psi=(2.0, 0.5))
    assert shifted.psi == 2.0


@given(
    lam=st.floats(0.1, 3.0),
    beta=st.floats(0.01, 1.0),
    psi=st.floats(0.05, 5.0),
    opp_lam=st.floats(0.1, 3.0),
    opp_beta=st.floats(0.01, 1.0),
    opp_psi=st.floats(0.05, 5.0),
    v=st.floats(0.01, 2.0),
    snr=st.floats(0.1, 10.0),
)
@settings(max_examples=40, deadline=None)
def test_conditional_utilities_are_ordered(lam, beta, psi, opp_lam, opp_beta, opp_psi, v, snr):
    user = make_user_profile(lam, beta, psi)
    opp = make_user_profile(opp_lam, opp_beta, opp_psi)
    sys = SystemParams(p=snr, v=v)
    by_policy = {
        policy: [conditional_utility(policy, state, user, opp, sys) for state in (0, 1)]
        for policy in (Policy.CC, Policy.WC, Policy.WW)
    }
    for state in (0, 1):
        assert by_policy[Policy.CC][state] <= by_policy[Policy.WC][state] + 1e-9
        assert by_policy[Policy.WC][state] <= by_policy[Policy.WW][state] + 1e-9
    for bad, good in by_policy.values():
        assert bad <= good + 1e-9


@given(
    lam=st.floats(0.1, 3.0),
    beta=st.floats(0.05, 1.0),
    psi=st.floats(0.05, 5.0),
    k1=st.integers(0, 4),
    k2=st.integers(0, 4),
    snr=st.floats(0.1, 10.0),
)
@settings(max_examples=30, deadline=None)
def test_more_opponents_never_help(lam, beta, psi, k1, k2, snr):
    user = make_user_profile(lam, beta, psi)
    sys = SystemParams(p=snr)
    for state in (0, 1):
        base = conditional_utility((k1, k2), state, user, sys=sys)
        extra_cc = conditional_utility((k1 + 1, k2), state, user, sys=sys)
        extra_wc = conditional_utility((k1, k2 + 1), state, user, sys=sys)
        assert extra_cc <= base + 1e-9
        assert extra_wc <= base + 1e-9
        # turning a WC opponent into a CC opponent
        assert extra_cc <= extra_wc + 1e-9


@given(
    lam=st.floats(0.1, 3.0),
    beta=st.floats(0.05, 1.0),
    psi=st.floats(0.05, 4.0),
    step=st.floats(0.1, 1.0),
    k1=st.integers(0, 3),
    k2=st.integers(0, 3),
    snr=st.floats(0.1, 10.0),
)
@settings(max_examples=30, deadline=None)
def test_utilities_increase_with_the_threshold(lam, beta, psi, step, k1, k2, snr):
    low = make_user_profile(lam, beta, psi)
    high = low.with_psi(psi + step)
    sys = SystemParams(p=snr)
    for state in (0, 1):
        before = conditional_utility((k1, k2), state, low, sys=sys)
        after = conditional_utility((k1, k2), state, high, sys=sys)
        assert after >= before - 1e-9
