"""
Pure-strategy Bayes-Nash equilibria of the association game.

A profile is an equilibrium when no user gains by switching policy in either
channel state. With ``C`` the 3G utility a user expects given its state and
the policies of the others, the conditions per policy are::

    CC:  C(0) >= v            (and C(1) >= v)
    WC:  C(0) <= v <= C(1)
    WW:  C(1) <= v            (and C(0) <= v)

The bracketed companions follow from ``C(1) > C(0)`` whenever both states
occur; they matter only when one state is empty (psi = 0 or alpha -> 0).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

from ..engine import ScenarioUtilities
from ..errors import ConsistencyError, ParameterError
from ..model import STATES, Policy, PolicyStatistics, Profile, Scenario
from ..util.utilz import first_true

logger = logging.getLogger(__name__)

POLICIES = (Policy.CC, Policy.WC, Policy.WW)
TWO_USER_CASES = {
    (Policy.CC, Policy.CC): "a",
    (Policy.CC, Policy.WC): "b",
    (Policy.CC, Policy.WW): "c",
    (Policy.WC, Policy.CC): "d",
    (Policy.WC, Policy.WC): "e",
    (Policy.WC, Policy.WW): "f",
    (Policy.WW, Policy.CC): "g",
    (Policy.WW, Policy.WC): "h",
    (Policy.WW, Policy.WW): "i",
}
SMALLEST_HALVED_PSI = 1e-12


@dataclass(frozen=True)
class Condition:
    """
    One inequality ``left >= right`` of an equilibrium certificate.

    A vacuous condition refers to a state of probability zero and always holds.
    """

    description: str
    left: float
    right: float
    vacuous: bool = False

    @property
    def margin(self) -> float:
        if self.vacuous:
            return math.inf
        return self.left - self.right

    def holds(self, tol: float) -> bool:
        return self.margin >= -tol


@dataclass(frozen=True)
class EquilibriumCertificate:
    """An equilibrium profile together with the inequalities that make it one."""

    profile: Profile
    conditions: Tuple[Condition, ...]
    case_label: str

    @property
    def min_margin(self) -> float:
        return min((c.margin for c in self.conditions), default=math.inf)

    def holds(self, tol: float) -> bool:
        return all(c.holds(tol) for c in self.conditions)

    def profile_label(self) -> str:
        if isinstance(self.profile, PolicyStatistics):
            return str(self.profile)
        return f"({self.profile[0].name},{self.profile[1].name})"


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of the state-by-state unilateral deviation check."""

    passed: bool
    checks: Tuple[Condition, ...]

    @property
    def worst_margin(self) -> float:
        return min((c.margin for c in self.checks), default=math.inf)

    @property
    def failures(self) -> Tuple[Condition, ...]:
        return tuple(c for c in self.checks if not c.vacuous and c.margin < 0)


@dataclass(frozen=True)
class PolicyUsage:
    """Policies seen across all equilibria at one threshold."""

    policies: FrozenSet[Policy]
    single_state: bool = False


def _utilities(scenario: Scenario, utilities: Optional[ScenarioUtilities]) -> ScenarioUtilities:
    if utilities is None:
        return ScenarioUtilities(scenario)
    if utilities.scenario is not scenario:
        return ScenarioUtilities(scenario, utilities.table, utilities.method)
    return utilities


def _at_least(value: Optional[float], v: float, label: str) -> Condition:
    if value is None:
        return Condition(f"{label} >= v", math.nan, v, vacuous=True)
    return Condition(f"{label} >= v", value, v)


def _at_most(value: Optional[float], v: float, label: str) -> Condition:
    if value is None:
        return Condition(f"{label} <= v", v, math.nan, vacuous=True)
    return Condition(f"{label} <= v", v, value)


def _descriptor_label(descriptor, player: int, two_user: bool) -> str:
    if two_user:
        return f"C{player + 1}_{descriptor.name}"
    return f"C_[{descriptor[0]},{descriptor[1]}]"


def policy_conditions(policy: Policy, descriptor, utilities: ScenarioUtilities, player=0) -> List[Condition]:
    """
    Equilibrium inequalities for a user playing ``policy`` against ``descriptor``.

    :param policy: the user's policy
    :param descriptor: opponent policy (two-user) or remainder counts ``(k1, k2)``
    :param utilities: utility lookups of the scenario
    :param player: index of the user in the two-user game
    """
    v = utilities.v
    label = _descriptor_label(descriptor, player, utilities.scenario.two_user)
    bad = utilities.value(descriptor, 0, player)
    good = utilities.value(descriptor, 1, player)
    if policy is Policy.CC:
        return [_at_least(bad, v, f"{label}(0)"), _at_least(good, v, f"{label}(1)")]
    if policy is Policy.WC:
        return [_at_least(good, v, f"{label}(1)"), _at_most(bad, v, f"{label}(0)")]
    return [_at_most(good, v, f"{label}(1)"), _at_most(bad, v, f"{label}(0)")]


def _require(scenario: Scenario, two_user: bool):
    if scenario.two_user != two_user:
        kind = "two-user" if two_user else "symmetric n-user"
        raise ParameterError(f"this solver needs a {kind} scenario")


def two_user_equilibria(
    scenario: Scenario, utilities: Optional[ScenarioUtilities] = None
) -> List[EquilibriumCertificate]:
    """
    Every pure-strategy equilibrium of the two-user game, in case order a to i.

    :raises ConsistencyError: when no candidate profile qualifies
    """
    _require(scenario, two_user=True)
    utilities = _utilities(scenario, utilities)
    tol = scenario.root_tol
    found = []
    for profile in TWO_USER_CASES:
        certificate = certificate_for(profile, utilities)
        if certificate.holds(tol):
            found.append(certificate)
    if not found:
        raise ConsistencyError(f"no two-user equilibrium found at psi = {[u.psi for u in scenario.users]}")
    logger.info(f"two-user game: {len(found)} equilibria ({', '.join(c.case_label for c in found)})")
    return found


def family_label(statistics: PolicyStatistics) -> str:
    """Name of the structural family a symmetric profile belongs to."""
    k, l, n = statistics.k_cc, statistics.k_wc, statistics.n
    if k == 0:
        if l == 0:
            return "a"
        return "c" if l == n else "b"
    if k == n:
        return "e"
    if l == 0:
        return "f"
    if k + l == n:
        return "d"
    return "extra"


def certificate_for(profile: Profile, utilities: ScenarioUtilities) -> EquilibriumCertificate:
    """Equilibrium inequalities of ``profile`` at the thresholds of ``utilities``, whether or not they hold."""
    conditions: List[Condition] = []
    if isinstance(profile, PolicyStatistics):
        for policy in profile.present():
            conditions += policy_conditions(policy, profile.remainder(policy), utilities)
        return EquilibriumCertificate(profile, tuple(conditions), family_label(profile))
    conditions += policy_conditions(profile[0], profile[1], utilities, player=0)
    conditions += policy_conditions(profile[1], profile[0], utilities, player=1)
    return EquilibriumCertificate(tuple(profile), tuple(conditions), TWO_USER_CASES[tuple(profile)])


def multi_user_equilibria(
    scenario: Scenario, utilities: Optional[ScenarioUtilities] = None
) -> List[EquilibriumCertificate]:
    """
    Every symmetric equilibrium ``[k_cc, k_wc]`` of the n-user game.

    Candidates are scanned with ``k_cc`` ascending, then ``k_wc`` ascending,
    and returned in that order.

    :raises ConsistencyError: when no candidate qualifies
    """
    _require(scenario, two_user=False)
    utilities = _utilities(scenario, utilities)
    n = scenario.n
    candidates = [PolicyStatistics(k, l, n) for k in range(n + 1) for l in range(n - k + 1)]
    if scenario.workers > 1:
        with ThreadPoolExecutor(max_workers=scenario.workers) as pool:
            certificates = list(pool.map(lambda s: certificate_for(s, utilities), candidates))
    else:
        certificates = [certificate_for(s, utilities) for s in candidates]
    found = [c for c in certificates if c.holds(scenario.root_tol)]
    if not found:
        raise ConsistencyError(f"no symmetric equilibrium found for n = {n}, psi = {scenario.user.psi}")
    logger.info(f"n = {n}: {len(found)} equilibria ({', '.join(c.profile_label() for c in found)})")
    return found


def equilibria(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> List[EquilibriumCertificate]:
    if scenario.two_user:
        return two_user_equilibria(scenario, utilities)
    return multi_user_equilibria(scenario, utilities)


def _payoff(policy: Policy, state: int, utility: float, v: float) -> float:
    return utility if policy.uses_3g(state) else v


def check_no_deviation(
    profile: Profile, scenario: Scenario, utilities: Optional[ScenarioUtilities] = None
) -> DeviationReport:
    """
    Check that no user gains by switching policy, state by state.

    :param profile: ``(Policy, Policy)`` or :class:`PolicyStatistics`
    :param scenario: the game, thresholds included
    :return: a report whose ``checks`` hold one condition per (user type, state, alternative)
    """
    utilities = _utilities(scenario, utilities)
    v = utilities.v
    if isinstance(profile, PolicyStatistics):
        _require(scenario, two_user=False)
        if profile.n != scenario.n:
            raise ParameterError(f"statistics are for n = {profile.n}, scenario has n = {scenario.n}")
        players = [(policy, profile.remainder(policy), 0) for policy in profile.present()]
    else:
        _require(scenario, two_user=True)
        players = [(profile[0], profile[1], 0), (profile[1], profile[0], 1)]

    checks: List[Condition] = []
    for policy, descriptor, player in players:
        label = _descriptor_label(descriptor, player, scenario.two_user)
        for state in STATES:
            utility = utilities.value(descriptor, state, player)
            for other in POLICIES:
                if other.action(state) == policy.action(state):
                    continue
                description = f"{policy.name} over {other.name} in state {state} against {label}"
                if utility is None:
                    checks.append(Condition(description, math.nan, math.nan, vacuous=True))
                else:
                    checks.append(
                        Condition(description, _payoff(policy, state, utility, v), _payoff(other, state, utility, v))
                    )
    passed = all(c.holds(scenario.root_tol) for c in checks)
    return DeviationReport(passed, tuple(checks))


def limiting_policy_usage(scenario: Scenario, psi_value) -> PolicyUsage:
    """
    Union of the policies played in any equilibrium at threshold ``psi_value``.

    At psi = 0 every gain is in the good state, so CC and WC prescribe the same
    action; both are reported as WC with ``single_state`` set.
    """
    shifted = scenario.with_psi(psi_value)
    used = set()
    for certificate in equilibria(shifted):
        if isinstance(certificate.profile, PolicyStatistics):
            used.update(certificate.profile.present())
        else:
            used.update(certificate.profile)
    psis = psi_value if isinstance(psi_value, (tuple, list)) else (psi_value,)
    single_state = all(x == 0 for x in psis)
    if single_state:
        logger.warning("psi = 0 leaves only the good state; CC and WC coincide and are reported as WC")
        if Policy.CC in used:
            used.discard(Policy.CC)
            used.add(Policy.WC)
    return PolicyUsage(frozenset(used), single_state)


def _dominant_descriptors(scenario: Scenario):
    """(largest, smallest) utility descriptors per player, ordered by interference."""
    if scenario.two_user:
        return [(Policy.WW, Policy.CC, 0), (Policy.WW, Policy.CC, 1)]
    return [((0, 0), (scenario.n - 1, 0), 0)]


def find_small_psi(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> Optional[float]:
    """
    Halve psi from 1 until every bad-state utility is below v.

    Checking the least interfered descriptor suffices, since it bounds all others.
    Returns ``None`` when even psi = 1e-12 does not qualify (v = 0).
    """
    utilities = _utilities(scenario, utilities)
    v = utilities.v
    psi = 1.0
    while psi >= SMALLEST_HALVED_PSI:
        if all(utilities.value(best, 0, player, psi=psi) < v for best, _, player in _dominant_descriptors(scenario)):
            return psi
        psi /= 2
    return None


def find_large_psi(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> Optional[float]:
    """
    Double psi from 1 until every bad-state utility exceeds v.

    Checking the most interfered descriptor suffices. Returns ``None`` when
    ``psi_max`` is reached first.
    """
    utilities = _utilities(scenario, utilities)
    v = utilities.v
    psi = min(1.0, scenario.ceiling)
    while True:
        values = [utilities.value(worst, 0, player, psi=psi) for _, worst, player in _dominant_descriptors(scenario)]
        if all(x is not None and x > v for x in values):
            return psi
        if psi >= scenario.ceiling:
            return None
        psi = min(2 * psi, scenario.ceiling)


def wc_saturation_count(scenario: Scenario, n_max: int, utilities: Optional[ScenarioUtilities] = None) -> Optional[int]:
    """
    Smallest n <= n_max with C_[0,n-1](1) < v, past which WC users cannot all stay on 3G.

    ``C_[0,n-1](1)`` decreases in n.
    """
    _require(scenario, two_user=False)
    utilities = _utilities(scenario, utilities)
    v = utilities.v

    def below(n):
        value = utilities.value((0, n - 1), 1)
        return value is not None and value < v

    count = first_true(below, 1, n_max)
    logger.info(f"WC saturation count: {count}")
    return count
