import math

import pytest

from celloffset.errors import ParameterError
from celloffset.metrics import bs_utility, optimal_bs_utility, price_of_anarchy, system_loads
from celloffset.model import Policy, PolicyStatistics, make_user_profile

USER = make_user_profile(0.6, 0.5, 1.0)
PAIR = (make_user_profile(0.6, 0.5, 1.0), make_user_profile(1.2, 0.8, 0.5))


def test_symmetric_bs_utility():
    assert bs_utility(PolicyStatistics(2, 3, 9), 1.0, USER) == pytest.approx(1.8232, abs=1e-4)
    assert bs_utility(PolicyStatistics(9, 0, 9), users=[USER]) == pytest.approx(4.5)
    assert bs_utility(PolicyStatistics(0, 0, 9), 1.0, USER) == 0.0


def test_psi_argument_overrides_stored_threshold():
    at_zero = bs_utility(PolicyStatistics(0, 4, 9), 0.0, USER)
    assert at_zero == pytest.approx(2.0)
    assert bs_utility(PolicyStatistics(0, 4, 9), 2.0, USER) < at_zero


def test_two_user_bs_utility():
    assert bs_utility((Policy.CC, Policy.CC), users=PAIR) == pytest.approx(1.3)
    expected = 0.5 + 0.8 * math.exp(-1.2 * 0.5)
    assert bs_utility((Policy.CC, Policy.WC), users=PAIR) == pytest.approx(expected)
    assert bs_utility((Policy.WW, Policy.WW), users=PAIR) == 0.0
    assert bs_utility((Policy.WC, Policy.WW), psi=(0.0, 3.0), users=PAIR) == pytest.approx(0.5)


def test_optimal_bs_utility_needs_n_for_symmetric_game():
    assert optimal_bs_utility(USER, 9) == pytest.approx(4.5)
    assert optimal_bs_utility(PAIR) == pytest.approx(1.3)
    with pytest.raises(ParameterError):
        optimal_bs_utility([USER])


def test_price_of_anarchy():
    assert price_of_anarchy(4.5, USER, 9) == pytest.approx(1.0)
    assert price_of_anarchy(1.8232, USER, 9) == pytest.approx(4.5 / 1.8232)
    assert price_of_anarchy(0.0, USER, 9) == math.inf
    assert price_of_anarchy(0.0, make_user_profile(0.6, 0.0, 1.0), 9) == 1.0


def test_system_loads():
    loads = system_loads(PolicyStatistics(3, 4, 9), 1.0, USER)
    assert loads.load_3g == pytest.approx(0.57725, abs=1e-5)
    assert loads.load_3g + loads.load_wifi == pytest.approx(1.0)
    assert not loads.weighted


def test_weighted_loads_sum_to_beta():
    loads = system_loads(PolicyStatistics(3, 4, 9), 1.0, USER, weighted=True)
    assert loads.load_3g == pytest.approx(0.5 * 0.57725, abs=1e-5)
    assert loads.load_3g + loads.load_wifi == pytest.approx(0.5)


def test_system_loads_checks_population():
    with pytest.raises(ParameterError):
        system_loads(PolicyStatistics(3, 4, 9), 1.0, USER, n=10)
