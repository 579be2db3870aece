"""Base-station utility, price of anarchy, and system loads."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import ParameterError
from .model import Policy, PolicyStatistics, UserProfile

logger = logging.getLogger(__name__)

LOAD_TOLERANCE = 1e-12


def _single(users) -> UserProfile:
    if isinstance(users, UserProfile):
        return users
    if len(users) != 1:
        raise ParameterError("the symmetric game takes a single shared profile")
    return users[0]


def bs_utility(profile, psi=None, users=None) -> float:
    """
    Expected number of demanding users attached to 3G.

    :param profile: ``(Policy, Policy)`` for the two-user game, or :class:`PolicyStatistics`
    :param psi: threshold(s) in force; ``None`` keeps the thresholds stored in ``users``
    :param users: the two profiles, or the shared profile of the symmetric game
    """
    if isinstance(profile, PolicyStatistics):
        user = _single(users)
        if psi is not None:
            user = user.with_psi(psi)
        return user.beta * (profile.k_cc + user.alpha * profile.k_wc)

    if len(profile) != 2 or len(users) != 2:
        raise ParameterError("two-user utility needs two policies and two profiles")
    if psi is not None:
        psi = tuple(psi) if isinstance(psi, (tuple, list)) else (psi, psi)
        users = [u.with_psi(x) for u, x in zip(users, psi)]
    total = 0.0
    for policy, user in zip(profile, users):
        if policy is Policy.CC:
            total += user.beta
        elif policy is Policy.WC:
            total += user.beta * user.alpha
    return total


def optimal_bs_utility(users, n: Optional[int] = None) -> float:
    """Centralized optimum: every demanding user on 3G."""
    if isinstance(users, UserProfile) or len(users) == 1:
        if n is None:
            raise ParameterError("the symmetric game needs n")
        return n * _single(users).beta
    return sum(u.beta for u in users)


def price_of_anarchy(bs_utility_at_play: float, users, n: Optional[int] = None) -> float:
    """
    Centralized optimum over achieved base-station utility.

    Returns ``math.inf`` when nothing is achieved.
    """
    optimum = optimal_bs_utility(users, n)
    if bs_utility_at_play <= 0:
        if optimum > 0:
            logger.warning("base-station utility is zero at play; price of anarchy is infinite")
            return math.inf
        return 1.0
    return optimum / bs_utility_at_play


@dataclass(frozen=True)
class LoadSummary:
    """Share of policy slots served by each system."""

    load_3g: float
    load_wifi: float
    n: int
    statistics: PolicyStatistics
    psi: float
    weighted: bool = False

    def __post_init__(self):
        if not self.weighted and abs(self.load_3g + self.load_wifi - 1.0) > LOAD_TOLERANCE:
            raise ParameterError(f"loads {self.load_3g} + {self.load_wifi} do not sum to one")


def system_loads(
    statistics: PolicyStatistics,
    psi: float,
    users: Union[UserProfile, Sequence[UserProfile]],
    n: Optional[int] = None,
    weighted: bool = False,
) -> LoadSummary:
    """
    Loads L(C) = (k_cc + k_wc alpha) / n and L(W) = 1 - L(C).

    With ``weighted`` each slot counts only when the user has demand, so the
    two loads are beta L(C) and beta (1 - L(C)) and sum to beta.
    """
    n = statistics.n if n is None else n
    if n != statistics.n:
        raise ParameterError(f"statistics are for n = {statistics.n}, not {n}")
    user = _single(users).with_psi(psi)
    load_3g = (statistics.k_cc + statistics.k_wc * user.alpha) / n
    load_wifi = 1.0 - load_3g
    if weighted:
        load_3g, load_wifi = user.beta * load_3g, user.beta * load_wifi
    return LoadSummary(load_3g, load_wifi, n, statistics, psi, weighted)
