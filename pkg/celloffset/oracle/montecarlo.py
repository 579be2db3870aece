"""
Brute-force estimates of 3G utilities and base-station utility.

Every random quantity is drawn from one uniform by inverse CDF: a demand is
``u < beta``, a gain is ``-log1p(-u) / lam``, and a gain restricted to one
side of the threshold is drawn from the matching truncated law directly.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..engine import UNCONDITIONED, UtilityTable, c_ww, conditional_utility, state_probability, unconditional_utility
from ..errors import EmptyConditioningError, ParameterError
from ..metrics import bs_utility
from ..model import Policy, PolicyStatistics, Scenario, SystemParams, UserProfile
from .rng import block_uniforms, run_blocks

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
MIN_CONDITIONING = 1e-6
AGREEMENT_SIGMAS = 4.0
EXACT_AGREEMENT = 1e-9


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def z_score(self, reference: float) -> float:
        """Distance to ``reference`` in standard errors; 0 or inf when the estimate is exact."""
        diff = self.mean - reference
        if self.stderr == 0:
            return 0.0 if abs(diff) <= EXACT_AGREEMENT else math.inf
        return diff / self.stderr

    def agrees(self, reference: float, sigmas: float = AGREEMENT_SIGMAS) -> bool:
        return abs(self.z_score(reference)) <= sigmas


def _check_samples(samples: int):
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < MIN_SAMPLES:
        raise ParameterError(f"samples must be an integer of at least {MIN_SAMPLES}, got {samples!r}")


def simulate_throughput(h_vector, action_vector, demand_vector, sys: SystemParams) -> np.ndarray:
    """
    Realized rate of every user for one draw of gains, actions and demands.

    A demanding 3G user gets ``log(1 + p h / (sigma2 + p * interference))`` where
    the interference sums the gains of the other demanding 3G users; a demanding
    WiFi user gets ``v``; a user without demand gets 0.

    :param h_vector: channel power gains, non-negative
    :param action_vector: 1 for 3G, 0 for WiFi
    :param demand_vector: 1 when the user has data to send
    :param sys: system constants
    """
    h = np.asarray(h_vector, dtype=float)
    a = np.asarray(action_vector)
    b = np.asarray(demand_vector)
    problems = []
    if not h.shape == a.shape == b.shape or h.ndim != 1:
        problems.append("gain, action and demand vectors must be one-dimensional and of equal length")
    else:
        if np.any(~np.isfinite(h)) or np.any(h < 0):
            problems.append("gains must be finite and non-negative")
        if not np.isin(a, (0, 1)).all():
            problems.append("actions must be 0 or 1")
        if not np.isin(b, (0, 1)).all():
            problems.append("demands must be 0 or 1")
    if problems:
        raise ParameterError(problems)

    signal = sys.p * h * a * b
    interference = signal.sum() - signal
    rates = np.where(a * b == 1, np.log1p(signal / (sys.sigma2 + interference)), 0.0)
    return np.where((a == 0) & (b == 1), sys.v, rates)


def _interference(u: np.ndarray, k1: int, k2: int, cc: UserProfile, wc: UserProfile) -> np.ndarray:
    """Sum of demanding opponents' gains; columns are (demand, gain) pairs, CC opponents first."""
    total = np.zeros(u.shape[0])
    for j in range(k1 + k2):
        opp = cc if j < k1 else wc
        demand = u[:, 2 * j] < opp.beta
        gain = -np.log1p(-u[:, 2 * j + 1]) / opp.lam
        if j >= k1:
            demand &= gain > opp.psi
        total += np.where(demand, gain, 0.0)
    return total


def _rates(own_gain, interference, sys: SystemParams) -> np.ndarray:
    return np.log1p(sys.p * own_gain / (sys.sigma2 + sys.p * interference))


def estimate_c_multi(
    h: float,
    k1: int,
    k2: int,
    user: UserProfile,
    sys: SystemParams,
    samples: int = 100000,
    seed: int = 0,
    case_index: int = 0,
    workers: int = 1,
) -> McEstimate:
    """
    Estimate the 3G rate at own gain ``h`` against k1 CC and k2 WC opponents.

    Without opponent randomness (no opponents, or no demand) the exact rate is returned with zero error.
    """
    _check_samples(samples)
    if k1 < 0 or k2 < 0:
        raise ParameterError(f"opponent counts must be non-negative, got [{k1},{k2}]")
    if (k1, k2) == (0, 0) or user.beta == 0:
        return McEstimate(c_ww(h, sys), 0.0, samples, seed)

    def sampler(block, rows):
        u = block_uniforms(seed, case_index, block, rows, 2 * (k1 + k2))
        return _rates(h, _interference(u, k1, k2, user, user), sys)

    stats = run_blocks(sampler, samples, workers)
    return McEstimate(stats.mean, stats.stderr, samples, seed)


def _own_gain(u: np.ndarray, user: UserProfile, state) -> np.ndarray:
    if state == 1:
        return user.psi - np.log1p(-u) / user.lam
    if state == 0:
        bad = -math.expm1(-user.lam * user.psi)
        return -np.log1p(-u * bad) / user.lam
    return -np.log1p(-u) / user.lam


def _opponent_counts(descriptor) -> Tuple[int, int]:
    if isinstance(descriptor, Policy):
        return {Policy.CC: (1, 0), Policy.WC: (0, 1), Policy.WW: (0, 0)}[descriptor]
    k1, k2 = descriptor
    if k1 < 0 or k2 < 0:
        raise ParameterError(f"opponent counts must be non-negative, got [{k1},{k2}]")
    return int(k1), int(k2)


def estimate_conditional(
    descriptor,
    state,
    user: UserProfile,
    opponents: Optional[UserProfile] = None,
    sys: SystemParams = SystemParams(),
    samples: int = 100000,
    seed: int = 0,
    case_index: int = 0,
    workers: int = 1,
) -> McEstimate:
    """
    Estimate the 3G utility of ``user`` given its state (0, 1 or ``"inf"``).

    :raises EmptyConditioningError: when the state has probability below 1e-6
    """
    _check_samples(samples)
    if state not in (0, 1, UNCONDITIONED):
        raise ParameterError(f"state must be 0, 1 or {UNCONDITIONED!r}, got {state!r}")
    probability = state_probability(user, state)
    if probability < MIN_CONDITIONING:
        raise EmptyConditioningError(f"state {state} has probability {probability:.3g} at psi = {user.psi}")
    opp = user if opponents is None else opponents
    k1, k2 = _opponent_counts(descriptor)

    def sampler(block, rows):
        u = block_uniforms(seed, case_index, block, rows, 1 + 2 * (k1 + k2))
        return _rates(_own_gain(u[:, 0], user, state), _interference(u[:, 1:], k1, k2, opp, opp), sys)

    stats = run_blocks(sampler, samples, workers)
    return McEstimate(stats.mean, stats.stderr, samples, seed)


def estimate_bs_utility(
    statistics: PolicyStatistics,
    psi: float,
    user: UserProfile,
    n: Optional[int] = None,
    samples: int = 100000,
    seed: int = 0,
    case_index: int = 0,
    workers: int = 1,
) -> McEstimate:
    """Estimate the expected number of demanding users whose realized action is 3G."""
    _check_samples(samples)
    if n is not None and n != statistics.n:
        raise ParameterError(f"statistics are for n = {statistics.n}, not {n}")
    user = user.with_psi(psi)
    k_cc, k_wc = statistics.k_cc, statistics.k_wc
    if user.beta == 0 or k_cc + k_wc == 0:
        return McEstimate(0.0, 0.0, samples, seed)

    def sampler(block, rows):
        u = block_uniforms(seed, case_index, block, rows, k_cc + 2 * k_wc)
        count = (u[:, :k_cc] < user.beta).sum(axis=1)
        for j in range(k_wc):
            col = k_cc + 2 * j
            gain = -np.log1p(-u[:, col + 1]) / user.lam
            count += (u[:, col] < user.beta) & (gain > user.psi)
        return count.astype(float)

    stats = run_blocks(sampler, samples, workers)
    return McEstimate(stats.mean, stats.stderr, samples, seed)


@dataclass(frozen=True)
class ValidationRow:
    case: int
    quantity: str
    descriptor: str
    state: str
    psi: float
    analytic: float
    estimate: McEstimate

    @property
    def z_score(self) -> float:
        return self.estimate.z_score(self.analytic)

    @property
    def passed(self) -> bool:
        return self.estimate.agrees(self.analytic)


def _grid_cases(scenario: Scenario) -> List[tuple]:
    base = scenario.users[0].psi or 1.0
    psis = (base, base / 2, base * 2)
    cases: List[tuple] = []
    if not scenario.two_user:
        n = scenario.n
        for psi, (k, l) in itertools.product(psis, [(n, 0), (2, 3), (0, n), (1, 1)]):
            if k + l <= n:
                cases.append(("bs_utility", PolicyStatistics(k, l, n), None, psi))
        descriptors: Sequence = [(k1, k2) for k1 in range(4) for k2 in range(4)]
    else:
        descriptors = [Policy.WW, Policy.WC, Policy.CC]
    for psi, descriptor, state in itertools.product(psis, descriptors, (1, 0, UNCONDITIONED)):
        cases.append(("utility", descriptor, state, psi))
    return cases


def validation_grid(
    scenario: Scenario, cases: int = 100, samples: Optional[int] = None, seed: Optional[int] = None
) -> List[ValidationRow]:
    """
    Compare analytic values with Monte-Carlo estimates over a fixed grid of cases.

    Case ``i`` draws from stream ``(seed, i)``, so each row is reproducible on its own.
    """
    samples = scenario.mc_samples if samples is None else samples
    seed = scenario.seed if seed is None else seed
    sys, tol = scenario.system, scenario.quad_tol
    table = UtilityTable(tol)
    user = scenario.users[0]
    opponents = scenario.users[1] if scenario.two_user else None
    rows: List[ValidationRow] = []
    for index, (quantity, descriptor, state, psi) in enumerate(_grid_cases(scenario)[:cases]):
        own = user.with_psi(psi)
        opp = opponents.with_psi(psi) if opponents is not None else None
        common = dict(samples=samples, seed=seed, case_index=index, workers=scenario.workers)
        if quantity == "bs_utility":
            analytic = bs_utility(descriptor, psi, own)
            estimate = estimate_bs_utility(descriptor, psi, own, **common)
            label, state_label = str(descriptor), ""
        else:
            if state_probability(own, state) < MIN_CONDITIONING:
                logger.warning(f"case {index}: state {state} is empty at psi = {psi}; skipped")
                continue
            if state == UNCONDITIONED:
                analytic = unconditional_utility(descriptor, own, opp, sys, tol, table)
            else:
                analytic = conditional_utility(descriptor, state, own, opp, sys, tol, table)
            estimate = estimate_conditional(descriptor, state, own, opp, sys, **common)
            label = descriptor.name if isinstance(descriptor, Policy) else f"[{descriptor[0]},{descriptor[1]}]"
            state_label = str(state)
        rows.append(ValidationRow(index, quantity, label, state_label, psi, analytic, estimate))
    passed = sum(row.passed for row in rows)
    logger.info(f"oracle grid: {passed}/{len(rows)} cases within {AGREEMENT_SIGMAS:g} standard errors")
    return rows
