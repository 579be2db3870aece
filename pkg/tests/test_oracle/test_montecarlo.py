import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from celloffset.engine import c_multi, c_ww, conditional_utility, unconditional_utility
from celloffset.errors import EmptyConditioningError, ParameterError
from celloffset.metrics import bs_utility
from celloffset.model import Policy, PolicyStatistics, SystemParams, make_user_profile, symmetric_scenario
from celloffset.oracle.montecarlo import (
    McEstimate,
    estimate_bs_utility,
    estimate_c_multi,
    estimate_conditional,
    simulate_throughput,
    validation_grid,
)
from celloffset.oracle.rng import BLOCK_SIZE, BlockStats, block_uniforms, run_blocks

SYS = SystemParams()
USER = make_user_profile(0.6, 0.5, 1.0)


def test_simulate_throughput_small_cases():
    lone = simulate_throughput([math.e - 1.0], [1], [1], SYS)
    assert lone[0] == pytest.approx(1.0)
    idle = simulate_throughput([2.0, 1.0], [1, 1], [0, 1], SYS)
    assert idle[0] == 0.0
    assert idle[1] == pytest.approx(math.log(2.0))
    pair = simulate_throughput([1.0, 1.0], [1, 1], [1, 1], SYS)
    assert pair == pytest.approx([0.405465, 0.405465], abs=1e-6)


def test_simulate_throughput_wifi_users():
    rates = simulate_throughput([1.0, 3.0, 0.5], [0, 1, 0], [1, 1, 0], SYS)
    assert list(rates) == pytest.approx([0.25, math.log(4.0), 0.0])


def test_simulate_throughput_rejects_bad_vectors():
    with pytest.raises(ParameterError):
        simulate_throughput([1.0, 2.0], [1], [1], SYS)
    with pytest.raises(ParameterError) as info:
        simulate_throughput([-1.0], [2], [1], SYS)
    assert len(info.value.problems) == 2


def test_block_streams_are_reproducible():
    first = block_uniforms(7, 3, 1, 5, 2)
    assert first.shape == (5, 2)
    np.testing.assert_array_equal(first, block_uniforms(7, 3, 1, 5, 2))
    assert not np.array_equal(first, block_uniforms(7, 4, 1, 5, 2))
    assert not np.array_equal(first, block_uniforms(7, 3, 2, 5, 2))


@given(
    left=st.lists(st.floats(-100, 100), min_size=1, max_size=40),
    right=st.lists(st.floats(-100, 100), min_size=1, max_size=40),
)
@settings(max_examples=50, deadline=None)
def test_block_merge_matches_pooled_statistics(left, right):
    merged = BlockStats.of(np.array(left)).merge(BlockStats.of(np.array(right)))
    pooled = BlockStats.of(np.array(left + right))
    assert merged.count == pooled.count
    assert merged.mean == pytest.approx(pooled.mean, abs=1e-9)
    assert merged.m2 == pytest.approx(pooled.m2, rel=1e-9, abs=1e-6)


def test_run_blocks_is_independent_of_workers():
    def sampler(block, rows):
        return block_uniforms(11, 0, block, rows, 1)[:, 0]

    samples = 2 * BLOCK_SIZE + 17
    single = run_blocks(sampler, samples, workers=1)
    threaded = run_blocks(sampler, samples, workers=3)
    assert single == threaded
    assert single.count == samples


def test_mc_estimate_scores():
    exact = McEstimate(1.0, 0.0, 1000, 0)
    assert exact.z_score(1.0) == 0.0
    assert exact.z_score(1.5) == math.inf
    noisy = McEstimate(1.0, 0.1, 1000, 0)
    assert noisy.z_score(0.8) == pytest.approx(2.0)
    assert noisy.agrees(0.7)
    assert not noisy.agrees(0.5)


def test_c_multi_estimate_is_exact_without_opponents():
    estimate = estimate_c_multi(1.5, 0, 0, USER, SYS, samples=1000)
    assert estimate.mean == c_ww(1.5, SYS)
    assert estimate.stderr == 0.0
    silent = estimate_c_multi(1.5, 3, 2, make_user_profile(0.6, 0.0, 1.0), SYS, samples=1000)
    assert silent.mean == c_ww(1.5, SYS)


def test_c_multi_estimate_agrees_with_quadrature():
    estimate = estimate_c_multi(1.5, 2, 3, USER, SYS, samples=200000, seed=5)
    assert estimate.agrees(c_multi(1.5, 2, 3, USER, SYS))


@pytest.mark.parametrize("descriptor,state", [((2, 3), 1), ((2, 3), 0), ((1, 0), "inf")])
def test_conditional_estimate_agrees_with_quadrature(descriptor, state):
    estimate = estimate_conditional(descriptor, state, USER, sys=SYS, samples=200000, seed=3)
    if state == "inf":
        analytic = unconditional_utility(descriptor, USER, sys=SYS)
    else:
        analytic = conditional_utility(descriptor, state, USER, sys=SYS)
    assert estimate.agrees(analytic)


def test_two_user_conditional_estimate():
    opp = make_user_profile(1.2, 0.5, 0.8)
    estimate = estimate_conditional(Policy.WC, 1, USER, opp, SYS, samples=200000, seed=9)
    assert estimate.agrees(conditional_utility(Policy.WC, 1, USER, opp, SYS))


def test_estimates_are_deterministic_across_workers():
    one = estimate_conditional((2, 1), 1, USER, sys=SYS, samples=150000, seed=2, workers=1)
    many = estimate_conditional((2, 1), 1, USER, sys=SYS, samples=150000, seed=2, workers=4)
    assert (one.mean, one.stderr) == (many.mean, many.stderr)


def test_empty_conditioning_and_small_samples():
    with pytest.raises(EmptyConditioningError):
        estimate_conditional((1, 0), 0, USER.with_psi(0.0), sys=SYS, samples=1000)
    with pytest.raises(ParameterError):
        estimate_conditional((1, 0), 1, USER, sys=SYS, samples=10)
    with pytest.raises(ParameterError):
        estimate_conditional((1, 0), 2, USER, sys=SYS, samples=1000)


def test_bs_utility_estimate():
    statistics = PolicyStatistics(2, 3, 9)
    estimate = estimate_bs_utility(statistics, 1.0, USER, samples=100000, seed=1)
    assert estimate.agrees(bs_utility(statistics, 1.0, USER))
    nobody = estimate_bs_utility(PolicyStatistics(0, 0, 9), 1.0, USER, samples=1000)
    assert (nobody.mean, nobody.stderr) == (0.0, 0.0)


def test_validation_grid_is_reproducible():
    scenario = symmetric_scenario(n=4)
    rows = validation_grid(scenario, cases=8, samples=20000, seed=4)
    assert [r.case for r in rows] == list(range(len(rows)))
    assert all(r.quantity == "bs_utility" for r in rows)
    assert all(r.passed for r in rows)
    again = validation_grid(scenario, cases=8, samples=20000, seed=4)
    assert [r.estimate for r in rows] == [r.estimate for r in again]


@pytest.mark.slow
def test_validation_grid_agreement():
    rows = validation_grid(symmetric_scenario(n=4), cases=100, samples=100000, seed=0)
    assert len(rows) >= 90
    assert any(r.quantity == "utility" for r in rows)
    assert sum(r.passed for r in rows) >= 0.95 * len(rows)


def test_standard_error_shrinks_with_sample_size():
    few = estimate_c_multi(1.5, 2, 3, USER, SYS, samples=10 ** 4, seed=8)
    many = estimate_c_multi(1.5, 2, 3, USER, SYS, samples=10 ** 6, seed=8)
    assert few.stderr / many.stderr == pytest.approx(10.0, rel=0.2)


@pytest.mark.slow
@pytest.mark.parametrize("descriptor,state", [((2, 3), 1), ((0, 0), 1), ((4, 1), 0)])
def test_million_sample_spot_cases(descriptor, state):
    estimate = estimate_conditional(descriptor, state, USER, sys=SYS, samples=10 ** 6, seed=6)
    assert estimate.agrees(conditional_utility(descriptor, state, USER, sys=SYS))
