from unittest import mock

import pytest
from hypothesis import given, settings, strategies as st

from celloffset.engine import ScenarioUtilities
from celloffset.errors import ConsistencyError, ParameterError
from celloffset.model import Policy, PolicyStatistics, symmetric_scenario, two_user_scenario
from celloffset.solvers.equilibrium import (
    TWO_USER_CASES,
    Condition,
    EquilibriumCertificate,
    certificate_for,
    check_no_deviation,
    equilibria,
    family_label,
    find_large_psi,
    find_small_psi,
    limiting_policy_usage,
    multi_user_equilibria,
    policy_conditions,
    two_user_equilibria,
    wc_saturation_count,
)

PAIR = [(0.6, 0.5, 1.0), (1.2, 0.5, 1.0)]


def test_condition_margins():
    assert Condition("x", 1.0, 0.5).margin == pytest.approx(0.5)
    assert Condition("x", 0.5, 0.5 + 1e-12).holds(1e-9)
    assert not Condition("x", 0.4, 0.5).holds(1e-9)
    assert Condition("x", float("nan"), 0.5, vacuous=True).holds(0.0)


@pytest.mark.parametrize(
    "k,l,label",
    [(0, 0, "a"), (0, 3, "b"), (0, 5, "c"), (2, 3, "d"), (5, 0, "e"), (2, 0, "f"), (1, 2, "extra")],
)
def test_family_label(k, l, label):
    assert family_label(PolicyStatistics(k, l, 5)) == label


def test_huge_v_leaves_everyone_on_wifi():
    scenario = symmetric_scenario(n=5, v=1e6)
    found = multi_user_equilibria(scenario)
    assert [c.profile for c in found] == [PolicyStatistics(0, 0, 5)]
    assert found[0].case_label == "a"


def test_zero_v_puts_everyone_on_3g():
    scenario = symmetric_scenario(n=5, v=0.0)
    found = multi_user_equilibria(scenario)
    assert [c.profile for c in found] == [PolicyStatistics(5, 0, 5)]
    assert found[0].case_label == "e"


def test_two_user_extremes():
    assert [c.case_label for c in two_user_equilibria(two_user_scenario(PAIR, v=1e6))] == ["i"]
    assert [c.case_label for c in two_user_equilibria(two_user_scenario(PAIR, v=0.0))] == ["a"]


@pytest.mark.parametrize("psi", [0.3, 1.0, 2.5])
def test_every_equilibrium_survives_deviation_check(psi):
    scenario = symmetric_scenario(n=6, psi=psi)
    for certificate in multi_user_equilibria(scenario):
        assert certificate.holds(scenario.root_tol)
        assert check_no_deviation(certificate.profile, scenario).passed


@pytest.mark.parametrize("v", [0.1, 0.25, 0.4])
def test_enumeration_is_complete(v):
    scenario = symmetric_scenario(n=4, v=v)
    utilities = ScenarioUtilities(scenario)
    brute = {
        PolicyStatistics(k, l, 4)
        for k in range(5)
        for l in range(5 - k)
        if check_no_deviation(PolicyStatistics(k, l, 4), scenario, utilities).passed
    }
    assert {c.profile for c in multi_user_equilibria(scenario, utilities)} == brute


def test_two_user_equilibria_are_sound():
    scenario = two_user_scenario(PAIR)
    found = two_user_equilibria(scenario)
    assert found
    labels = [c.case_label for c in found]
    assert labels == sorted(labels)
    for certificate in found:
        assert TWO_USER_CASES[certificate.profile] == certificate.case_label
        assert check_no_deviation(certificate.profile, scenario).passed


def test_equilibria_dispatches_on_mode():
    assert isinstance(equilibria(two_user_scenario(PAIR))[0].profile, tuple)
    assert isinstance(equilibria(symmetric_scenario(n=3))[0].profile, PolicyStatistics)


def test_policy_conditions_include_companions():
    utilities = ScenarioUtilities(symmetric_scenario(n=4))
    conditions = policy_conditions(Policy.CC, (1, 1), utilities)
    assert [c.description for c in conditions] == ["C_[1,1](0) >= v", "C_[1,1](1) >= v"]
    conditions = policy_conditions(Policy.WW, (1, 1), utilities)
    assert [c.description for c in conditions] == ["C_[1,1](1) <= v", "C_[1,1](0) <= v"]


def test_certificate_labels():
    two_user = ScenarioUtilities(two_user_scenario(PAIR))
    certificate = certificate_for((Policy.CC, Policy.WC), two_user)
    assert certificate.case_label == "b"
    assert certificate.profile_label() == "(CC,WC)"
    assert len(certificate.conditions) == 4
    symmetric = certificate_for(PolicyStatistics(2, 1, 4), ScenarioUtilities(symmetric_scenario(n=4)))
    assert symmetric.profile_label() == "[2,1]/4"
    # CC, WC and WW users each contribute two inequalities
    assert len(symmetric.conditions) == 6


def test_no_equilibrium_is_a_consistency_error():
    failing = EquilibriumCertificate(PolicyStatistics(0, 0, 3), (Condition("never", 0.0, 1.0),), "a")
    with mock.patch("celloffset.solvers.equilibrium.certificate_for", return_value=failing):
        with pytest.raises(ConsistencyError):
            multi_user_equilibria(symmetric_scenario(n=3))
        with pytest.raises(ConsistencyError):
            two_user_equilibria(two_user_scenario(PAIR))


def test_solvers_check_the_game_mode():
    with pytest.raises(ParameterError):
        multi_user_equilibria(two_user_scenario(PAIR))
    with pytest.raises(ParameterError):
        two_user_equilibria(symmetric_scenario(n=3))
    with pytest.raises(ParameterError):
        check_no_deviation(PolicyStatistics(1, 1, 4), symmetric_scenario(n=5))


def test_deviation_check_flags_a_bad_profile():
    scenario = symmetric_scenario(n=5, v=1e6)
    report = check_no_deviation(PolicyStatistics(5, 0, 5), scenario)
    assert not report.passed
    assert report.failures
    assert report.worst_margin < 0


def test_small_psi_removes_cc():
    scenario = symmetric_scenario(n=5)
    psi = find_small_psi(scenario)
    assert psi is not None and psi <= 1.0
    assert Policy.CC not in limiting_policy_usage(scenario, psi).policies


def test_large_psi_leaves_only_cc():
    scenario = symmetric_scenario(n=3)
    psi = find_large_psi(scenario)
    assert psi is not None and psi >= 1.0
    usage = limiting_policy_usage(scenario, psi)
    assert usage.policies == frozenset({Policy.CC})
    assert not usage.single_state


def test_zero_v_has_no_small_psi():
    assert find_small_psi(symmetric_scenario(n=3, v=0.0)) is None


def test_psi_zero_reports_single_state():
    usage = limiting_policy_usage(symmetric_scenario(n=4), 0.0)
    assert usage.single_state
    assert Policy.CC not in usage.policies


def test_two_user_limits():
    scenario = two_user_scenario(PAIR)
    psi = find_small_psi(scenario)
    assert psi is not None
    assert Policy.CC not in limiting_policy_usage(scenario, psi).policies


def test_wc_saturation_count():
    assert wc_saturation_count(symmetric_scenario(n=3, v=1e6), 20) == 1
    assert wc_saturation_count(symmetric_scenario(n=3, v=0.0), 20) is None
    scenario = symmetric_scenario(n=3, v=0.5)
    utilities = ScenarioUtilities(scenario)
    count = wc_saturation_count(scenario, 60, utilities)
    assert count is not None and count > 1
    assert utilities.value((0, count - 1), 1) < 0.5
    assert utilities.value((0, count - 2), 1) >= 0.5


@given(
    lam=st.floats(0.1, 3.0),
    beta=st.floats(0.01, 1.0),
    psi=st.floats(0.05, 5.0),
    v=st.floats(0.01, 2.0),
    snr=st.floats(0.1, 10.0),
    n=st.integers(2, 6),
)
@settings(max_examples=40, deadline=None)
def test_symmetric_game_always_has_an_equilibrium(lam, beta, psi, v, snr, n):
    scenario = symmetric_scenario(lam=lam, beta=beta, psi=psi, n=n, v=v, p=snr)
    utilities = ScenarioUtilities(scenario)
    found = multi_user_equilibria(scenario, utilities)
    assert found
    for certificate in found:
        assert check_no_deviation(certificate.profile, scenario, utilities).passed


@given(
    first=st.tuples(st.floats(0.1, 3.0), st.floats(0.01, 1.0), st.floats(0.05, 5.0)),
    second=st.tuples(st.floats(0.1, 3.0), st.floats(0.01, 1.0), st.floats(0.05, 5.0)),
    v=st.floats(0.01, 2.0),
    snr=st.floats(0.1, 10.0),
)
@settings(max_examples=40, deadline=None)
def test_two_user_game_always_has_an_equilibrium(first, second, v, snr):
    scenario = two_user_scenario([first, second], v=v, p=snr)
    assert two_user_equilibria(scenario)


@pytest.mark.parametrize("v", [0.1, 0.25, 0.5, 1.0])
def test_two_user_enumeration_is_complete(v):
    scenario = two_user_scenario(PAIR, v=v)
    utilities = ScenarioUtilities(scenario)
    policies = (Policy.WW, Policy.WC, Policy.CC)
    brute = {
        (first, second)
        for first in policies
        for second in policies
        if check_no_deviation((first, second), scenario, utilities).passed
    }
    assert {c.profile for c in two_user_equilibria(scenario, utilities)} == brute


def test_equilibria_with_idle_users_hold_in_larger_games():
    scenario = symmetric_scenario(n=8, v=0.7)
    utilities = ScenarioUtilities(scenario)
    with_idle = [c.profile for c in multi_user_equilibria(scenario, utilities) if c.profile.k_ww > 0]
    assert with_idle
    for profile in with_idle:
        active = profile.k_cc + profile.k_wc
        for m in range(max(active, 2), active + 6):
            grown = scenario.with_n(m)
            statistics = PolicyStatistics(profile.k_cc, profile.k_wc, m)
            assert check_no_deviation(statistics, grown, ScenarioUtilities(grown, utilities.table)).passed
