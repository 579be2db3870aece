"""
Channel utilities of the association game.

A c-function gives the expected 3G rate of a user whose own gain is ``h``,
averaged over the demands and gains of the opponents. Conditional utilities
average a c-function over the user's own gain on the bad state (h < psi,
state 0), the good state (h > psi, state 1), or the whole law (``"inf"``).

Interference from opponents enters only through its sum. A truncated
exponential on [psi, inf) is psi plus a fresh exponential, so ``r`` full and
``v`` truncated interferers sum to ``v * psi + Erlang(r + v, lam)``.
"""

import logging
import math
import threading
from typing import Callable, Dict, Hashable, List, Optional, Tuple, Union

from scipy import special

from ..errors import EmptyConditioningError, NumericalError, ParameterError
from ..model import Policy, Scenario, SystemParams, UserProfile
from ..util.quadrature import integrate_half_line, integrate_unit
from ..util.utilz import binomial_pmf

logger = logging.getLogger(__name__)

UNCONDITIONED = "inf"
EMPTY_NORMALIZER = 1e-300
# mixture weights below this are dropped from the c_multi triple sum
NEGLIGIBLE_WEIGHT = 1e-18
METHODS = ("transform", "nested")
_LAST_BELOW_ONE = 1.0 - 2.0 ** -53

Descriptor = Union[Policy, Tuple[int, int]]


def _check_gain(h):
    if not h >= 0 or not math.isfinite(h):
        raise ParameterError(f"channel gain h must be finite and non-negative, got {h}")


def c_ww(h: float, sys: SystemParams) -> float:
    """
    Rate with no interference, log(1 + p h / sigma2).

    :param h: own channel power gain
    :param sys: system constants
    """
    _check_gain(h)
    if sys.p == 0:
        return 0.0
    return math.log1p(sys.snr_scale * h)


def erlang_interference_expectation(h: float, m: int, shift: float, lam: float, sys: SystemParams, tol=1e-9) -> float:
    """
    E[log(1 + p h / (sigma2 + p (shift + G)))] with G ~ Erlang(m, lam).

    The Erlang law is integrated through its quantile function, so the
    integrand lives on [0, 1] and needs no truncation.

    :param h: own channel power gain
    :param m: number of exponential interferers, 0 meaning G = 0
    :param shift: deterministic part of the interference gain
    :param lam: rate of each interferer's gain
    :param sys: system constants
    :param tol: absolute quadrature tolerance
    """
    _check_gain(h)
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise ParameterError(f"interferer count m must be a non-negative integer, got {m}")
    if not shift >= 0:
        raise ParameterError(f"shift must be non-negative, got {shift}")
    if sys.p == 0 or h == 0:
        return 0.0
    snr = sys.snr_scale
    if m == 0:
        return math.log1p(snr * h / (1.0 + snr * shift))

    def integrand(u):
        g = special.gammaincinv(m, u) / lam
        return math.log1p(snr * h / (1.0 + snr * (shift + g)))

    return integrate_unit(integrand, tol, what=f"Erlang({m}) interference expectation")


def c_cc_two_user(h: float, opp: UserProfile, sys: SystemParams, tol=1e-9) -> float:
    """3G rate against an opponent who uses 3G whenever it has demand."""
    value = 0.0
    if opp.beta < 1.0:
        value += (1.0 - opp.beta) * c_ww(h, sys)
    if opp.beta > 0.0:
        value += opp.beta * erlang_interference_expectation(h, 1, 0.0, opp.lam, sys, tol)
    return value


def c_wc_two_user(h: float, opp: UserProfile, sys: SystemParams, tol=1e-9) -> float:
    """3G rate against an opponent who uses 3G only above its threshold."""
    interfering = opp.beta * opp.alpha
    value = 0.0
    if interfering < 1.0:
        value += (1.0 - interfering) * c_ww(h, sys)
    if interfering > 0.0:
        value += interfering * erlang_interference_expectation(h, 1, opp.psi, opp.lam, sys, tol)
    return value


def interference_mixture(k1: int, k2: int, user: UserProfile) -> Dict[Tuple[int, int], float]:
    """
    Law of the interference against ``k1`` CC and ``k2`` WC opponents.

    :return: weights keyed by ``(m, v)``: Erlang order ``m`` with ``v`` truncated terms
    """
    if k1 < 0 or k2 < 0:
        raise ParameterError(f"opponent counts must be non-negative, got [{k1},{k2}]")
    beta, alpha = user.beta, user.alpha
    weights: Dict[Tuple[int, int], float] = {}
    for r in range(k1 + 1):
        w_r = binomial_pmf(r, k1, beta)
        if w_r == 0.0:
            continue
        for q in range(k2 + 1):
            w_q = w_r * binomial_pmf(q, k2, beta)
            if w_q == 0.0:
                continue
            for v in range(q + 1):
                w = w_q * binomial_pmf(v, q, alpha)
                if w > NEGLIGIBLE_WEIGHT:
                    weights[(r + v, v)] = weights.get((r + v, v), 0.0) + w
    return weights


def c_multi(h: float, k1: int, k2: int, user: UserProfile, sys: SystemParams, tol=1e-9) -> float:
    """
    3G rate against ``k1`` CC and ``k2`` WC opponents sharing ``user``'s profile.

    Sums Erlang interference expectations over the binomial mixture of how
    many opponents demand and how many WC demanders sit above the threshold.
    """
    _check_gain(h)
    return sum(
        w * erlang_interference_expectation(h, m, v * user.psi, user.lam, sys, tol)
        for (m, v), w in sorted(interference_mixture(k1, k2, user).items())
    )


def state_probability(user: UserProfile, state) -> float:
    """Probability of the conditioning event of ``state``."""
    if state == 1:
        return user.alpha
    if state == 0:
        return -math.expm1(-user.lam * user.psi)
    if state == UNCONDITIONED:
        return 1.0
    raise ParameterError(f"state must be 0, 1 or 'inf', got {state!r}")


def _descriptor_key(descriptor: Descriptor) -> Hashable:
    if isinstance(descriptor, Policy):
        return descriptor
    try:
        k1, k2 = descriptor
    except (TypeError, ValueError):
        raise ParameterError(f"descriptor must be a Policy or a pair [k1, k2], got {descriptor!r}")
    if isinstance(k1, bool) or isinstance(k2, bool) or int(k1) != k1 or int(k2) != k2 or k1 < 0 or k2 < 0:
        raise ParameterError(f"descriptor counts must be non-negative integers, got {descriptor!r}")
    return int(k1), int(k2)


def _opponent_factors(descriptor: Hashable) -> List[Tuple[Policy, int]]:
    if isinstance(descriptor, Policy):
        return [(descriptor, 1)]
    k1, k2 = descriptor
    return [(Policy.CC, k1), (Policy.WC, k2)]


def _one_minus_exp_over(s, psi):
    """(1 - exp(-s psi)) / s, continuous at s = 0."""
    if s == 0.0:
        return psi
    return -math.expm1(-s * psi) / s


def _laplace_factor(s, policy: Policy, opp: UserProfile) -> float:
    """E[exp(-s * interference)] contributed by one opponent."""
    if policy is Policy.WW or opp.beta == 0.0:
        return 1.0
    lam = opp.lam
    if policy is Policy.CC:
        return 1.0 - opp.beta * s / (lam + s)
    alpha = opp.alpha
    return 1.0 - opp.beta * alpha * (1.0 - math.exp(-s * opp.psi) * lam / (lam + s))


def _own_kernel(user: UserProfile, state) -> Callable[[float], float]:
    """(1 - E[exp(-s h) | state]) / s for the user's own gain."""
    lam, psi = user.lam, user.psi
    if state == UNCONDITIONED:
        return lambda s: 1.0 / (lam + s)
    if state == 1:
        return lambda s: (1.0 + lam * _one_minus_exp_over(s, psi)) / (lam + s)
    bad = -math.expm1(-lam * psi)
    scaled_alpha = lam * user.alpha
    return lambda s: (bad - scaled_alpha * _one_minus_exp_over(s, psi)) / ((lam + s) * bad)


def _transform_utility(descriptor, state, user, opp, sys, tol) -> float:
    # E log(1 + X/Y) = int_0^inf E[e^{-sY}] (1 - E[e^{-sX}]) / s ds, Y = sigma2/p + interference
    mu = 1.0 / sys.snr_scale
    kernel = _own_kernel(user, state)
    factors = [(policy, count) for policy, count in _opponent_factors(descriptor) if count > 0]

    def integrand(x):
        s = x / mu
        value = math.exp(-x) * kernel(s) / mu
        for policy, count in factors:
            value *= _laplace_factor(s, policy, opp) ** count
        return value

    return integrate_half_line(integrand, tol, what=f"utility {descriptor} state {state}")


def _c_function(descriptor, opp: UserProfile, sys: SystemParams, tol) -> Callable[[float], float]:
    if descriptor is Policy.WW:
        return lambda h: c_ww(h, sys)
    if descriptor is Policy.CC:
        return lambda h: c_cc_two_user(h, opp, sys, tol)
    if descriptor is Policy.WC:
        return lambda h: c_wc_two_user(h, opp, sys, tol)
    k1, k2 = descriptor
    return lambda h: c_multi(h, k1, k2, opp, sys, tol)


def _nested_utility(descriptor, state, user, opp, sys, tol) -> float:
    c = _c_function(descriptor, opp, sys, tol / 4)
    lam, psi = user.lam, user.psi
    # inverse-CDF of the own gain restricted to the conditioning set
    if state == 1:
        gain = lambda u: psi - math.log1p(-min(u, _LAST_BELOW_ONE)) / lam  # noqa: E731
    elif state == 0:
        bad = -math.expm1(-lam * psi)
        gain = lambda u: -math.log1p(-u * bad) / lam  # noqa: E731
    else:
        gain = lambda u: -math.log1p(-min(u, _LAST_BELOW_ONE)) / lam  # noqa: E731
    return integrate_unit(lambda u: c(gain(u)), tol / 2, what=f"nested utility {descriptor} state {state}")


class UtilityTable(object):
    """
    Thread-safe memo of utility values.

    Keys carry the full description of a value (descriptor, state, profiles,
    system, tolerance, method), so a table may be shared between scenarios.
    Concurrent misses on one key may both compute; the first stored value wins.
    """

    __slots__ = ["tol", "_entries", "_lock", "hits", "misses"]

    def __init__(self, tol: Optional[float] = None):
        self.tol = tol
        self._entries: Dict[Hashable, float] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_or_compute(self, key: Hashable, compute: Callable[[], float]) -> float:
        with self._lock:
            if key in self._entries:
                self.hits += 1
                return self._entries[key]
        value = compute()
        if not math.isfinite(value):
            raise NumericalError(f"utility {key[:2]} is not finite")
        if value < 0:
            # quadrature noise around zero utility
            value = 0.0
        with self._lock:
            self.misses += 1
            return self._entries.setdefault(key, value)

    def entries(self) -> List[Tuple[Hashable, float]]:
        with self._lock:
            return list(self._entries.items())

    def __len__(self):
        with self._lock:
            return len(self._entries)

    def __repr__(self):
        return (
            f"<{self.__class__.__module__}.{self.__class__.__name__} entries={len(self)} "
            f"hits={self.hits} misses={self.misses} tol={self.tol} at {hex(id(self))}>"
        )


def _utility(descriptor, state, user, opponents, sys, tol, table, method) -> float:
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}, got {method!r}")
    key = _descriptor_key(descriptor)
    opp = user if opponents is None else opponents
    if sys.p == 0:
        return 0.0

    def compute():
        logger.debug(f"computing {method} utility {key} state {state} psi {user.psi}")
        if method == "transform":
            return _transform_utility(key, state, user, opp, sys, tol)
        return _nested_utility(key, state, user, opp, sys, tol)

    if table is None:
        return max(compute(), 0.0)
    return table.get_or_compute((key, state, user, opp, sys, tol, method), compute)


def conditional_utility(
    descriptor: Descriptor,
    state: int,
    user: UserProfile,
    opponents: Optional[UserProfile] = None,
    sys: SystemParams = SystemParams(),
    tol: float = 1e-9,
    table: Optional[UtilityTable] = None,
    method: str = "transform",
) -> float:
    """
    Expected 3G rate of ``user`` given its own state.

    :param descriptor: opponent policy (two-user game) or counts ``(k1, k2)`` of CC and WC opponents
    :param state: 0 for h < psi, 1 for h > psi
    :param user: the user's profile
    :param opponents: the opponent's profile; ``None`` for the symmetric game
    :param sys: system constants
    :param tol: absolute quadrature tolerance
    :param table: optional memo
    :param method: ``"transform"`` or ``"nested"``
    :raises EmptyConditioningError: when the state has probability below 1e-300
    """
    if state not in (0, 1):
        raise ParameterError(f"state must be 0 or 1, got {state!r}")
    normalizer = state_probability(user, state)
    if normalizer < EMPTY_NORMALIZER:
        raise EmptyConditioningError(f"state {state} has probability {normalizer:.3g} at psi = {user.psi}")
    return _utility(descriptor, state, user, opponents, sys, tol, table, method)


def unconditional_utility(
    descriptor: Descriptor,
    user: UserProfile,
    opponents: Optional[UserProfile] = None,
    sys: SystemParams = SystemParams(),
    tol: float = 1e-9,
    table: Optional[UtilityTable] = None,
    method: str = "transform",
) -> float:
    """Expected 3G rate of ``user`` over the full law of its own gain."""
    return _utility(descriptor, UNCONDITIONED, user, opponents, sys, tol, table, method)


class ScenarioUtilities(object):
    """
    Utility lookups bound to one scenario.

    ``value`` returns ``None`` for a state that cannot occur (psi = 0 for
    state 0, alpha below 1e-300 for state 1) so callers can treat the
    matching condition as vacuous.
    """

    __slots__ = ["scenario", "table", "method"]

    def __init__(self, scenario: Scenario, table: Optional[UtilityTable] = None, method="transform"):
        self.scenario = scenario
        self.table = table if table is not None else UtilityTable(scenario.quad_tol)
        self.method = method

    @property
    def v(self) -> float:
        return self.scenario.system.v

    def profiles(self, player=0, psi=None) -> Tuple[UserProfile, UserProfile]:
        users = self.scenario.users
        if psi is not None:
            if self.scenario.two_user:
                psi = tuple(psi) if isinstance(psi, (tuple, list)) else (psi, psi)
                users = tuple(u.with_psi(x) for u, x in zip(users, psi))
            else:
                users = (users[0].with_psi(psi),)
        if self.scenario.two_user:
            return users[player], users[1 - player]
        return users[0], users[0]

    def value(self, descriptor: Descriptor, state, player=0, psi=None) -> Optional[float]:
        user, opp = self.profiles(player, psi)
        if self.scenario.two_user != isinstance(descriptor, Policy):
            raise ParameterError(
                "the two-user game is indexed by the opponent's policy, the symmetric game by counts [k1, k2]"
            )
        sys, tol = self.scenario.system, self.scenario.quad_tol
        if state == UNCONDITIONED:
            return unconditional_utility(descriptor, user, opp, sys, tol, self.table, self.method)
        if state_probability(user, state) < EMPTY_NORMALIZER:
            return None
        return conditional_utility(descriptor, state, user, opp, sys, tol, self.table, self.method)

    def __repr__(self):
        return f"<{self.__class__.__module__}.{self.__class__.__name__} n={self.scenario.n} table={self.table!r}>"
