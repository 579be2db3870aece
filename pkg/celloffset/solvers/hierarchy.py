"""
Base-station threshold design.

Three regimes are solved here: the centralized optimum (users directed to
3G), the Stackelberg game where the base station announces thresholds and
the users play an equilibrium, and the two-user non-cooperative game where
each threshold is the crossing point of the user's own c-function with v.

All searches are bracketing by doubling followed by bisection; every
utility involved is monotone in the thresholds.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from scipy import optimize

from ..engine import ScenarioUtilities, UtilityTable, c_wc_two_user
from ..errors import ConsistencyError, ConvergenceError, ParameterError
from ..metrics import bs_utility, price_of_anarchy
from ..model import Policy, PolicyStatistics, Scenario
from ..util.quadrature import integrate_half_line
from ..util.utilz import bisect_increasing, bracket_upward, last_true
from .equilibrium import (
    EquilibriumCertificate,
    certificate_for,
    check_no_deviation,
    equilibria,
)

logger = logging.getLogger(__name__)

BEST_RESPONSE_BUDGET = 200
TWO_USER_GRID = 32
ZOOM_POINTS = 8
ZOOM_ROUNDS = 2
BOUND_EPSILON = 1e-6
CALIBRATION_TARGET = (12, 41)

PsiChoice = Union[float, Tuple[float, float]]


@dataclass(frozen=True)
class Candidate:
    """One row of the (k, l) table: k active users, l of them on CC."""

    k: int
    l: int
    psi: Optional[float]
    value: float
    status: str


@dataclass(frozen=True)
class StackelbergOutcome:
    """
    Thresholds chosen by the base station and the profile they induce.

    ``mode`` is ``"centralized"``, ``"stackelberg"`` or ``"noncooperative"``.
    The centralized profile is prescribed rather than induced, so its
    certificate carries no conditions.
    """

    mode: str
    psi_choice: PsiChoice
    induced: EquilibriumCertificate
    bs_utility: float
    poa: float
    kstar: Optional[int] = None
    nstar: Optional[int] = None
    candidates: Tuple[Candidate, ...] = ()
    infeasible: bool = False
    residuals: Tuple[float, ...] = ()
    iterations: int = 0


@dataclass(frozen=True)
class CountThresholds:
    """k* and n*, capped at the search limit; a zero means no count qualifies."""

    kstar: int
    nstar: int
    n_max: int

    @property
    def kstar_saturated(self) -> bool:
        return self.kstar >= self.n_max

    @property
    def nstar_saturated(self) -> bool:
        return self.nstar >= self.n_max


@dataclass(frozen=True)
class KBound:
    """Upper bound k** on k*, and the root k+ it was built from."""

    kbound: int
    kplus: float
    no_solution: bool = False


@dataclass(frozen=True)
class CalibrationRow:
    ratio: float
    kstar: int
    nstar: int
    hit: bool


def _utilities(scenario: Scenario, utilities: Optional[ScenarioUtilities]) -> ScenarioUtilities:
    if utilities is None:
        return ScenarioUtilities(scenario)
    if utilities.scenario is not scenario:
        return ScenarioUtilities(scenario, utilities.table, utilities.method)
    return utilities


def _excess(value: Optional[float], target: float) -> float:
    # an empty state cannot meet a lower bound
    return -1.0 if value is None else value - target


def _current_psi(scenario: Scenario) -> PsiChoice:
    if scenario.two_user:
        return tuple(u.psi for u in scenario.users)
    return scenario.user.psi


def _outcome(mode, scenario, certificate, utilities, **fields) -> StackelbergOutcome:
    n = None if scenario.two_user else scenario.n
    utility = bs_utility(certificate.profile, users=scenario.users)
    report = check_no_deviation(certificate.profile, scenario, _utilities(scenario, utilities))
    if not report.passed:
        raise ConsistencyError(
            f"{mode} profile {certificate.profile_label()} fails the deviation check, "
            f"worst margin {report.worst_margin:.3g}"
        )
    return StackelbergOutcome(
        mode=mode,
        psi_choice=_current_psi(scenario),
        induced=certificate,
        bs_utility=utility,
        poa=price_of_anarchy(utility, scenario.users, n),
        **fields,
    )


def _fallback(mode, scenario, utilities, **fields) -> StackelbergOutcome:
    """Best equilibrium at the scenario's own thresholds, flagged infeasible."""
    logger.warning(f"{mode}: no threshold induces 3G use; keeping the current thresholds")
    found = equilibria(scenario, _utilities(scenario, utilities))
    best = max(found, key=lambda c: bs_utility(c.profile, users=scenario.users))
    return _outcome(mode, scenario, best, utilities, infeasible=True, **fields)


def centralized(scenario: Scenario) -> StackelbergOutcome:
    """Every user directed to 3G; the thresholds are irrelevant and kept as given."""
    if scenario.two_user:
        profile = (Policy.CC, Policy.CC)
        n = None
    else:
        profile = PolicyStatistics(scenario.n, 0, scenario.n)
        n = scenario.n
    utility = bs_utility(profile, users=scenario.users)
    return StackelbergOutcome(
        mode="centralized",
        psi_choice=_current_psi(scenario),
        induced=EquilibriumCertificate(profile, (), "centralized"),
        bs_utility=utility,
        poa=price_of_anarchy(utility, scenario.users, n),
    )


def _smallest_psi(g, scenario: Scenario) -> Optional[float]:
    ceiling = scenario.ceiling
    bracket = bracket_upward(g, min(1.0, ceiling), ceiling)
    if bracket is None:
        return None
    logger.debug(f"bracket {bracket}")
    return bisect_increasing(g, bracket[0], bracket[1], scenario.root_tol)


def _pair(i: int, psi_i: float, psi_j: float) -> Tuple[float, float]:
    return (psi_i, psi_j) if i == 0 else (psi_j, psi_i)


def _all_cc_pair(utilities: ScenarioUtilities) -> Optional[Tuple[float, float]]:
    scenario = utilities.scenario
    v, tol = utilities.v, scenario.root_tol
    psis = []
    for i in (0, 1):
        # against a CC opponent only the user's own threshold matters
        psi = _smallest_psi(lambda x: _excess(utilities.value(Policy.CC, 0, i, psi=(x, x)), v + tol), scenario)
        if psi is None:
            return None
        psis.append(psi)
    return psis[0], psis[1]


def _wc_lower_boundary(psi2: float, utilities: ScenarioUtilities) -> Optional[float]:
    """Smallest psi1 making (WC, WC) an equilibrium for a given psi2, if any."""
    scenario = utilities.scenario
    v = utilities.v

    def good_state(psi1):
        values = [utilities.value(Policy.WC, 1, i, psi=(psi1, psi2)) for i in (0, 1)]
        return min(_excess(x, v) for x in values)

    if good_state(0.0) >= 0:
        psi1 = 0.0
    else:
        psi1 = _smallest_psi(good_state, scenario)
        if psi1 is None:
            return None
    for i in (0, 1):
        bad = utilities.value(Policy.WC, 0, i, psi=(psi1, psi2))
        if bad is not None and bad - v > scenario.root_tol:
            return None
    return psi1


def _psi2_grid(user2, ceiling: float, points: int) -> List[float]:
    """Psi2 values uniform in alpha2 and uniform in psi2, covering both ends of (0, psi_max]."""
    floor_alpha = math.exp(-user2.lam * ceiling)
    step = (1.0 - floor_alpha) / (points + 1)
    by_alpha = [-math.log(floor_alpha + step * j) / user2.lam for j in range(1, points + 1)]
    by_psi = [ceiling * j / points for j in range(1, points + 1)]
    return sorted(set(by_alpha + by_psi))


def _solve_wc_wc(
    utilities: ScenarioUtilities, seed: Optional[float] = None
) -> Optional[Tuple[float, Tuple[float, float]]]:
    """
    Maximize beta1 alpha1 + beta2 alpha2 over thresholds inducing (WC, WC).

    :param seed: a psi2 known to admit a (WC, WC) design, scanned with the grid
    """
    scenario = utilities.scenario
    u1, u2 = scenario.users
    best: Optional[Tuple[float, Tuple[float, float]]] = None

    def visit(psi2):
        nonlocal best
        psi1 = _wc_lower_boundary(psi2, utilities)
        if psi1 is None:
            return
        value = u1.beta * math.exp(-u1.lam * psi1) + u2.beta * math.exp(-u2.lam * psi2)
        if best is None or value > best[0]:
            best = (value, (psi1, psi2))

    grid = _psi2_grid(u2, scenario.ceiling, TWO_USER_GRID)
    if seed is not None:
        grid = sorted(set(grid + [seed]))
    for psi2 in grid:
        visit(psi2)
    if best is None:
        return None
    for _ in range(ZOOM_ROUNDS):
        centre = best[1][1]
        index = grid.index(centre)
        lo = grid[index - 1] if index > 0 else 0.0
        hi = grid[index + 1] if index + 1 < len(grid) else scenario.ceiling
        step = (hi - lo) / (ZOOM_POINTS + 1)
        grid = sorted(set([lo + step * j for j in range(1, ZOOM_POINTS + 1)] + [centre]))
        for psi2 in grid:
            visit(psi2)
        logger.debug(f"zoom on psi2 in ({lo:.6g}, {hi:.6g}): best {best}")
    return best


def _solve_cc_wc(i: int, utilities: ScenarioUtilities) -> Optional[Tuple[float, Tuple[float, float]]]:
    """Maximize beta_i + beta_j alpha_j over thresholds inducing CC for i and WC for j."""
    scenario = utilities.scenario
    v, tol, ceiling = utilities.v, scenario.root_tol, scenario.ceiling
    j = 1 - i
    user_i, user_j = scenario.users[i], scenario.users[j]

    def constraints(psi_j):
        pair = _pair(i, ceiling, psi_j)
        good_j = utilities.value(Policy.CC, 1, j, psi=pair)
        bad_i = utilities.value(Policy.WC, 0, i, psi=pair)
        return min(_excess(good_j, v), _excess(bad_i, v))

    if constraints(0.0) >= 0:
        psi_j = 0.0
    else:
        psi_j = _smallest_psi(constraints, scenario)
        if psi_j is None:
            return None
    bad_j = utilities.value(Policy.CC, 0, j, psi=_pair(i, ceiling, psi_j))
    if bad_j is not None and bad_j - v > tol:
        return None
    psi_i = _smallest_psi(lambda x: _excess(utilities.value(Policy.WC, 0, i, psi=_pair(i, x, psi_j)), v), scenario)
    if psi_i is None:
        return None
    value = user_i.beta + user_j.beta * math.exp(-user_j.lam * psi_j)
    return value, _pair(i, psi_i, psi_j)


def stackelberg_two_user(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> StackelbergOutcome:
    """
    Thresholds maximizing the expected number of 3G users in the two-user game.

    When both users value 3G above v on average the base station can induce
    (CC, CC); otherwise the better of the (WC, WC) and (CC, WC) designs wins.
    The non-cooperative fixed point is always among the (WC, WC) plans, so
    the design never does worse than selfish thresholds.
    """
    if not scenario.two_user:
        raise ParameterError("stackelberg_two_user needs a two-user scenario")
    utilities = _utilities(scenario, utilities)
    v = utilities.v

    plans: List[Tuple[float, Tuple[float, float], Tuple[Policy, Policy]]] = []
    if all(utilities.value(Policy.CC, "inf", i) > v for i in (0, 1)):
        pair = _all_cc_pair(utilities)
        if pair is not None:
            plans.append((scenario.total_demand, pair, (Policy.CC, Policy.CC)))
    if not plans:
        seed = _noncooperative_pair(scenario)
        if seed is not None:
            u1, u2 = scenario.users
            value = u1.beta * math.exp(-u1.lam * seed[0]) + u2.beta * math.exp(-u2.lam * seed[1])
            plans.append((value, seed, (Policy.WC, Policy.WC)))
        shared = _solve_wc_wc(utilities, None if seed is None else seed[1])
        if shared is not None:
            plans.append((shared[0], shared[1], (Policy.WC, Policy.WC)))
        for i in (0, 1):
            split = _solve_cc_wc(i, utilities)
            if split is not None:
                profile = (Policy.CC, Policy.WC) if i == 0 else (Policy.WC, Policy.CC)
                plans.append((split[0], split[1], profile))

    for value, pair, profile in sorted(plans, key=lambda plan: -plan[0]):
        chosen = scenario.with_psi(pair)
        bound = ScenarioUtilities(chosen, utilities.table, utilities.method)
        certificate = certificate_for(profile, bound)
        if not certificate.holds(scenario.root_tol):
            logger.debug(f"discarding {profile} at {pair}: margin {certificate.min_margin:.3g}")
            continue
        logger.info(f"stackelberg: {certificate.profile_label()} at psi = {pair}, utility {value:.6g}")
        return _outcome("stackelberg", chosen, certificate, bound)
    return _fallback("stackelberg", scenario, utilities)


def best_response_psi(i: int, psi_j: float, scenario: Scenario) -> Optional[float]:
    """
    Threshold of user ``i`` at which its c-function against a WC opponent equals v.

    :param i: user index, 0 or 1
    :param psi_j: the opponent's threshold
    :return: the threshold, or ``None`` when the c-function never reaches v below ``psi_max``
    """
    if i not in (0, 1):
        raise ParameterError(f"user index must be 0 or 1, got {i!r}")
    sys, v = scenario.system, scenario.system.v
    if v == 0:
        return 0.0
    if sys.p == 0:
        return None
    opp = scenario.users[1 - i].with_psi(psi_j)
    if opp.beta == 0:
        closed = math.expm1(v) / sys.snr_scale
        return closed if closed <= scenario.ceiling else None
    tol = scenario.quad_tol
    return _smallest_psi(lambda h: c_wc_two_user(h, opp, sys, tol) - v, scenario)


def _best_response_fixed_point(scenario: Scenario) -> Tuple[Optional[Tuple[float, float]], int]:
    """
    Iterate the two best responses Gauss-Seidel style from psi_max.

    :return: the fixed point, or ``None`` when a c-function never reaches v, and the iterations used
    :raises ConvergenceError: when the iteration budget runs out
    """
    psi = [scenario.ceiling, scenario.ceiling]
    change = math.inf
    for iteration in range(1, BEST_RESPONSE_BUDGET + 1):
        previous = tuple(psi)
        for i in (0, 1):
            response = best_response_psi(i, psi[1 - i], scenario)
            if response is None:
                logger.debug(f"user {i + 1}: c-function never reaches v below psi_max")
                return None, iteration
            psi[i] = response
        change = max(abs(a - b) for a, b in zip(psi, previous))
        logger.debug(f"best-response iteration {iteration}: psi = {psi}, change {change:.3g}")
        if change < scenario.root_tol:
            return (psi[0], psi[1]), iteration
    raise ConvergenceError("best-response iteration did not settle", last_iterate=tuple(psi), residual=change)


def _noncooperative_pair(scenario: Scenario) -> Optional[Tuple[float, float]]:
    try:
        return _best_response_fixed_point(scenario)[0]
    except ConvergenceError as e:
        logger.debug(f"no non-cooperative seed: {e}")
        return None


def noncooperative_two_user(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> StackelbergOutcome:
    """
    Fixed point of the two best-response thresholds.

    :raises ConvergenceError: when the iteration budget runs out
    """
    if not scenario.two_user:
        raise ParameterError("the non-cooperative design is solved for two users only")
    psi, iteration = _best_response_fixed_point(scenario)
    if psi is None:
        logger.warning("a c-function never reaches v below psi_max")
        return _fallback("noncooperative", scenario, utilities, iterations=iteration)

    sys, tol = scenario.system, scenario.quad_tol
    residuals = tuple(
        abs(c_wc_two_user(psi[i], scenario.users[1 - i].with_psi(psi[1 - i]), sys, tol) - sys.v) for i in (0, 1)
    )
    chosen = scenario.with_psi(tuple(psi))
    bound = ScenarioUtilities(chosen, utilities.table if utilities else None)
    certificate = certificate_for((Policy.WC, Policy.WC), bound)
    logger.info(f"non-cooperative thresholds {tuple(psi)} after {iteration} iterations")
    return _outcome("noncooperative", chosen, certificate, bound, residuals=residuals, iterations=iteration)


def find_kstar_nstar(scenario: Scenario, n_max: int, utilities: Optional[ScenarioUtilities] = None) -> CountThresholds:
    """
    Largest user counts the base station can keep on 3G.

    k* is the largest k with C_[k-1,0](inf) >= v (all CC users), n* the
    largest n with C_[0,n-1](inf) >= v (all WC users, at the scenario's psi).
    """
    if scenario.two_user:
        raise ParameterError("k* and n* are defined for the symmetric game")
    if n_max < 2:
        raise ParameterError(f"n_max must be at least 2, got {n_max}")
    utilities = _utilities(scenario, utilities)
    v = utilities.v
    kstar = last_true(lambda k: utilities.value((k - 1, 0), "inf") >= v, 1, n_max)
    nstar = last_true(lambda n: utilities.value((0, n - 1), "inf") >= v, 1, n_max)
    counts = CountThresholds(kstar, nstar, n_max)
    if counts.kstar_saturated or counts.nstar_saturated:
        logger.warning(f"k* = {kstar}, n* = {nstar} reach the search limit {n_max}")
    if kstar == 0:
        logger.warning("a lone 3G user already falls below v; k* is empty")
    logger.info(f"k* = {kstar}, n* = {nstar}")
    return counts


def _solve_psi_kl(k: int, l: int, utilities: ScenarioUtilities) -> Tuple[Optional[float], str]:
    scenario = utilities.scenario
    n, v, tol = scenario.n, utilities.v, scenario.root_tol
    if not 0 <= l <= k <= n:
        raise ParameterError(f"need 0 <= l <= k <= n, got k = {k}, l = {l}, n = {n}")
    if k == 0:
        return None, "none"

    def active(psi):
        terms = []
        if k - l >= 1:
            terms.append(_excess(utilities.value((l, k - l - 1), 1, psi=psi), v))
        if l >= 1:
            terms.append(_excess(utilities.value((l - 1, k - l), 0, psi=psi), v))
        return min(terms)

    lo, hi = tol, scenario.ceiling
    if active(hi) < 0 or active(lo) >= 0:
        return None, "none"
    psi = bisect_increasing(active, lo, hi, tol)
    if k < n:
        idle = utilities.value((l, k - l), 1, psi=psi)
        if idle is not None and idle - v > tol:
            return None, "excluded"
    return psi, "ok"


def solve_psi_kl(k: int, l: int, scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> Optional[float]:
    """
    Threshold at which the tighter 3G condition of profile [l, k - l] meets v.

    :param k: active users (CC plus WC)
    :param l: users on CC
    :return: the threshold, or ``None`` when there is no crossing or an idle user would join 3G
    """
    if scenario.two_user:
        raise ParameterError("solve_psi_kl is defined for the symmetric game")
    return _solve_psi_kl(k, l, _utilities(scenario, utilities))[0]


def _candidate(k: int, l: int, utilities: ScenarioUtilities) -> Candidate:
    scenario = utilities.scenario
    psi, status = _solve_psi_kl(k, l, utilities)
    if psi is None:
        return Candidate(k, l, None, 0.0, status)
    statistics = PolicyStatistics(l, k - l, scenario.n)
    chosen = scenario.with_psi(psi)
    if not check_no_deviation(statistics, chosen, ScenarioUtilities(chosen, utilities.table, utilities.method)).passed:
        return Candidate(k, l, psi, 0.0, "rejected")
    return Candidate(k, l, psi, bs_utility(statistics, psi, scenario.users), "ok")


def stackelberg_multi(scenario: Scenario, utilities: Optional[ScenarioUtilities] = None) -> StackelbergOutcome:
    """
    Threshold maximizing the expected number of 3G users in the symmetric game.

    :raises ConsistencyError: when the chosen profile fails the deviation check
    """
    if scenario.two_user:
        raise ParameterError("stackelberg_multi needs a symmetric scenario")
    utilities = _utilities(scenario, utilities)
    n, v, tol = scenario.n, utilities.v, scenario.root_tol
    counts = find_kstar_nstar(scenario, n, utilities)
    kstar, nstar = counts.kstar, counts.nstar

    if n <= kstar:
        psi = _smallest_psi(lambda x: _excess(utilities.value((n - 1, 0), 0, psi=x), v + tol), scenario)
        if psi is not None:
            chosen = scenario.with_psi(psi)
            bound = ScenarioUtilities(chosen, utilities.table, utilities.method)
            certificate = certificate_for(PolicyStatistics(n, 0, n), bound)
            logger.info(f"n = {n} <= k* = {kstar}: all users on CC from psi = {psi:.6g}")
            return _outcome("stackelberg", chosen, certificate, bound, kstar=kstar, nstar=nstar)
        logger.warning("no threshold meets the all-CC condition below psi_max; scanning candidates")

    pairs = [(k, l) for k in range(max(kstar, 1), min(n, nstar) + 1) for l in range(k + 1)]
    if scenario.workers > 1:
        with ThreadPoolExecutor(max_workers=scenario.workers) as pool:
            candidates = list(pool.map(lambda kl: _candidate(kl[0], kl[1], utilities), pairs))
    else:
        candidates = [_candidate(k, l, utilities) for k, l in pairs]

    best: Optional[Candidate] = None
    for candidate in candidates:
        if candidate.status == "ok" and (best is None or candidate.value > best.value):
            best = candidate
    if best is None:
        return _fallback("stackelberg", scenario, utilities, kstar=kstar, nstar=nstar, candidates=tuple(candidates))

    chosen = scenario.with_psi(best.psi)
    bound = ScenarioUtilities(chosen, utilities.table, utilities.method)
    certificate = certificate_for(PolicyStatistics(best.l, best.k - best.l, n), bound)
    logger.info(f"n = {n}: best candidate k = {best.k}, l = {best.l} at psi = {best.psi:.6g}, P = {best.value:.6g}")
    return _outcome("stackelberg", chosen, certificate, bound, kstar=kstar, nstar=nstar, candidates=tuple(candidates))


def bound_integral(scenario: Scenario) -> float:
    """(lam / 2) times the integral of log(1 + p h / sigma2) e^(-lam h) over h >= 0."""
    user, sys = scenario.users[0], scenario.system
    if sys.p == 0:
        return 0.0
    return integrate_half_line(
        lambda h: 0.5 * user.lam * math.log1p(sys.snr_scale * h) * math.exp(-user.lam * h),
        scenario.quad_tol,
        what="bound integral",
    )


def kstar_upper_bound(
    scenario: Scenario, prefactor: float = 0.5, utilities: Optional[ScenarioUtilities] = None
) -> KBound:
    """
    Upper bound k** = ceil(max(2/beta + 1, k+)) on k*.

    k+ is the root of
    ``prefactor e^(-(k-1) beta^2 / 2) C_WW(inf) + log((k-1) beta / ((k-1) beta - 2)) = v``,
    whose left side decreases on k > 2/beta + 1.

    :param prefactor: 0.5 is the default reading, 1.0 gives the plain tail bound
    """
    if scenario.two_user:
        raise ParameterError("the k* bound is defined for the symmetric game")
    utilities = _utilities(scenario, utilities)
    beta, v = scenario.user.beta, utilities.v
    problems = []
    if beta <= 0:
        problems.append("beta must be positive for the k* bound")
    if v <= 0:
        problems.append("v must be positive for the k* bound")
    if prefactor <= 0:
        problems.append("prefactor must be positive")
    if problems:
        raise ParameterError(problems)

    mean_rate = utilities.value((0, 0), "inf")
    floor = 2.0 / beta + 1.0

    def excess(k):
        m = (k - 1) * beta
        return prefactor * math.exp(-(k - 1) * beta ** 2 / 2) * mean_rate + math.log(m / (m - 2)) - v

    lo = floor + BOUND_EPSILON
    if excess(lo) < 0:
        logger.warning(f"bound equation has no root above 2/beta + 1 = {floor:.6g}")
        return KBound(math.ceil(floor), floor, no_solution=True)
    width = 1.0
    while excess(floor + width) > 0:
        width *= 2
    kplus = optimize.bisect(excess, lo, floor + width, xtol=scenario.root_tol, maxiter=400)
    kbound = math.ceil(max(floor, kplus))
    logger.info(f"k+ = {kplus:.6g}, k** = {kbound}")
    return KBound(kbound, kplus)


def poa_curve(
    scenario: Scenario, n_from: int, n_to: int, table: Optional[UtilityTable] = None
) -> List[Tuple[int, StackelbergOutcome]]:
    """Stackelberg outcome for every n in ``[n_from, n_to]``, sharing one utility table."""
    if n_from < 2 or n_to < n_from:
        raise ParameterError(f"need 2 <= n_from <= n_to, got {n_from}..{n_to}")
    table = table if table is not None else UtilityTable(scenario.quad_tol)
    sizes = list(range(n_from, n_to + 1))

    def solve(n):
        sized = scenario.with_n(n)
        return n, stackelberg_multi(sized, ScenarioUtilities(sized, table))

    if scenario.workers > 1:
        with ThreadPoolExecutor(max_workers=scenario.workers) as pool:
            return list(pool.map(solve, sizes))
    return [solve(n) for n in sizes]


def calibrate_snr(
    scenario: Scenario, ratios: Sequence[float], n_max: int = 200, target: Tuple[int, int] = CALIBRATION_TARGET
) -> List[CalibrationRow]:
    """k* and n* for each p / sigma2 ratio, flagging the ratios that reproduce ``target``."""
    rows = []
    for ratio in ratios:
        shifted = scenario.with_system(p=ratio * scenario.system.sigma2)
        counts = find_kstar_nstar(shifted, n_max)
        rows.append(CalibrationRow(ratio, counts.kstar, counts.nstar, (counts.kstar, counts.nstar) == tuple(target)))
    return rows
