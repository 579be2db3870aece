"""
Domain types of the WiFi/3G association game.

Every type is a frozen dataclass; derived quantities such as ``alpha`` are
properties, so they can never drift from the fields they are computed from.
"""

import enum
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

from ..errors import ParameterError

# beyond 50/lambda the good-channel probability is below e^-50
PSI_MAX_DECAY = 50.0

STATES = (0, 1)


def _as_float(name: str, value, problems: List[str]) -> Optional[float]:
    if isinstance(value, bool):
        problems.append(f"{name} must be a number, got {value!r}")
        return None
    try:
        value = float(value)
    except (TypeError, ValueError):
        problems.append(f"{name} must be a number, got {value!r}")
        return None
    if not math.isfinite(value):
        problems.append(f"{name} must be finite, got {value}")
        return None
    return value


@dataclass(frozen=True)
class SystemParams:
    """
    Physical constants shared by every utility.

    :param p: transmit power (linear)
    :param sigma2: noise variance (linear)
    :param v: WiFi throughput, in nats like the 3G rate
    """

    p: float = 1.0
    sigma2: float = 1.0
    v: float = 0.25

    def problems(self) -> List[str]:
        """List every violated invariant, empty when valid."""
        out: List[str] = []
        p = _as_float("p", self.p, out)
        sigma2 = _as_float("sigma2", self.sigma2, out)
        v = _as_float("v", self.v, out)
        if sigma2 is not None and sigma2 <= 0:
            out.append("sigma2 must be positive")
        if p is not None and p < 0:
            out.append("p must be non-negative")
        if v is not None and v < 0:
            out.append("v must be non-negative")
        return out

    @property
    def snr_scale(self) -> float:
        """p / sigma2, the gain-to-SNR factor."""
        return self.p / self.sigma2


@dataclass(frozen=True)
class UserProfile:
    """
    Statistical description of one user.

    :param lam: rate of the exponential channel power gain
    :param beta: probability the user has data to send
    :param psi: CQI threshold broadcast by the base station
    """

    lam: float
    beta: float
    psi: float

    @property
    def alpha(self) -> float:
        """Probability of the good state, exp(-lam * psi)."""
        return math.exp(-self.lam * self.psi)

    @property
    def psi_ceiling(self) -> float:
        return PSI_MAX_DECAY / self.lam

    def with_psi(self, psi: float) -> "UserProfile":
        return make_user_profile(self.lam, self.beta, psi)

    def problems(self) -> List[str]:
        out: List[str] = []
        lam = _as_float("lambda", self.lam, out)
        beta = _as_float("beta", self.beta, out)
        psi = _as_float("psi", self.psi, out)
        if lam is not None and lam <= 0:
            out.append("lambda must be positive")
        if beta is not None and not 0.0 <= beta <= 1.0:
            out.append("beta must lie in [0, 1]")
        if psi is not None and psi < 0:
            out.append("psi must be non-negative")
        return out


def make_user_profile(lam, beta, psi) -> UserProfile:
    """
    Build a validated :class:`UserProfile`.

    :raises ParameterError: naming every offending field
    """
    profile = UserProfile(lam, beta, psi)
    problems = profile.problems()
    if problems:
        raise ParameterError(problems)
    return UserProfile(float(lam), float(beta), float(psi))


class Policy(enum.Enum):
    """A user's (bad-state, good-state) action pair; W is WiFi, C is 3G."""

    WW = ("W", "W")
    WC = ("W", "C")
    CC = ("C", "C")

    @property
    def bad_state_action(self) -> str:
        return self.value[0]

    @property
    def good_state_action(self) -> str:
        return self.value[1]

    def action(self, state: int) -> str:
        return self.value[1] if state == 1 else self.value[0]

    def uses_3g(self, state: int) -> bool:
        return self.action(state) == "C"

    @classmethod
    def from_actions(cls, bad_state_action: str, good_state_action: str) -> "Policy":
        """
        Look up the policy for an action pair.

        :raises ParameterError: for (C, W), which switches to 3G only on the bad channel
        """
        pair = (str(bad_state_action).upper(), str(good_state_action).upper())
        for policy in cls:
            if policy.value == pair:
                return policy
        raise ParameterError(f"policy {pair[0]}{pair[1]} is not allowed; use one of WW, WC, CC")

    @classmethod
    def parse(cls, text: str) -> "Policy":
        text = str(text).strip().upper()
        if len(text) != 2:
            raise ParameterError(f"policy must be two letters, got {text!r}")
        return cls.from_actions(text[0], text[1])


@dataclass(frozen=True)
class PolicyStatistics:
    """Counts K = [k_cc, k_wc] of a symmetric n-user profile."""

    k_cc: int
    k_wc: int
    n: int

    def __post_init__(self):
        problems = []
        for name in ("k_cc", "k_wc", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                problems.append(f"{name} must be an integer, got {value!r}")
            elif value < 0:
                problems.append(f"{name} must be non-negative")
        if not problems and self.k_cc + self.k_wc > self.n:
            problems.append(f"k_cc + k_wc = {self.k_cc + self.k_wc} exceeds n = {self.n}")
        if problems:
            raise ParameterError(problems)

    @property
    def k_ww(self) -> int:
        return self.n - self.k_cc - self.k_wc

    def count(self, policy: Policy) -> int:
        return {Policy.CC: self.k_cc, Policy.WC: self.k_wc, Policy.WW: self.k_ww}[policy]

    def present(self) -> Tuple[Policy, ...]:
        """Policies played by at least one user, in CC, WC, WW order."""
        return tuple(p for p in (Policy.CC, Policy.WC, Policy.WW) if self.count(p) > 0)

    def remainder(self, policy: Policy) -> Tuple[int, int]:
        """Opponent counts [k1, k2] seen by a user playing ``policy``."""
        if self.count(policy) == 0:
            raise ParameterError(f"no user plays {policy.name} in {self}")
        if policy is Policy.CC:
            return self.k_cc - 1, self.k_wc
        if policy is Policy.WC:
            return self.k_cc, self.k_wc - 1
        return self.k_cc, self.k_wc

    def __str__(self):
        return f"[{self.k_cc},{self.k_wc}]/{self.n}"


TwoUserProfile = Tuple[Policy, Policy]
Profile = Union[TwoUserProfile, PolicyStatistics]


@dataclass(frozen=True)
class Scenario:
    """
    Everything a solver needs: physics, users, and numerical settings.

    ``users`` holds one profile in the symmetric n-user game and two in the
    two-user game.
    """

    system: SystemParams
    users: Tuple[UserProfile, ...]
    n: int = 2
    quad_tol: float = 1e-9
    root_tol: float = 1e-7
    psi_max: Optional[float] = None
    seed: int = 0
    mc_samples: int = 100000
    workers: int = 1

    @property
    def two_user(self) -> bool:
        return len(self.users) == 2

    @property
    def user(self) -> UserProfile:
        """The shared profile of the symmetric game."""
        if self.two_user:
            raise ParameterError("the two-user game has no shared profile")
        return self.users[0]

    @property
    def ceiling(self) -> float:
        """Search ceiling for thresholds."""
        if self.psi_max is not None:
            return self.psi_max
        return min(u.psi_ceiling for u in self.users)

    def with_psi(self, psi: Union[float, Sequence[float]]) -> "Scenario":
        if isinstance(psi, (tuple, list)):
            if len(psi) != len(self.users):
                raise ParameterError(f"expected {len(self.users)} thresholds, got {len(psi)}")
            users = tuple(u.with_psi(x) for u, x in zip(self.users, psi))
        else:
            users = tuple(u.with_psi(psi) for u in self.users)
        return replace(self, users=users)

    def with_n(self, n: int) -> "Scenario":
        return validate_scenario(replace(self, n=n))

    def with_system(self, **changes) -> "Scenario":
        return validate_scenario(replace(self, system=replace(self.system, **changes)))

    @property
    def total_demand(self) -> float:
        """Centralized optimum of the base-station utility."""
        if self.two_user:
            return sum(u.beta for u in self.users)
        return self.n * self.user.beta


def validate_scenario(raw: Scenario) -> Scenario:
    """
    Check every invariant of a scenario and return its normalized form.

    :raises ParameterError: listing every violated invariant
    """
    problems: List[str] = []
    if not isinstance(raw.system, SystemParams):
        problems.append("system must be SystemParams")
    else:
        problems.extend(raw.system.problems())

    users = tuple(raw.users) if isinstance(raw.users, (tuple, list)) else (raw.users,)
    if len(users) not in (1, 2):
        problems.append(f"users must hold one symmetric profile or two profiles, got {len(users)}")
    for i, user in enumerate(users):
        prefix = "" if len(users) == 1 else f"user {i + 1}: "
        problems.extend(prefix + msg for msg in user.problems())

    n = raw.n
    if isinstance(n, bool) or not isinstance(n, int):
        problems.append(f"n must be an integer, got {n!r}")
    elif n < 2:
        problems.append("at least two players are required (n >= 2)")
    elif len(users) == 2 and n != 2:
        problems.append("the two-user game requires n = 2")

    for name in ("quad_tol", "root_tol"):
        value = _as_float(name, getattr(raw, name), problems)
        if value is not None and value <= 0:
            problems.append(f"{name} must be positive")
    if raw.psi_max is not None:
        value = _as_float("psi_max", raw.psi_max, problems)
        if value is not None and value <= 0:
            problems.append("psi_max must be positive")
    if isinstance(raw.seed, bool) or not isinstance(raw.seed, int) or not 0 <= raw.seed < 2 ** 64:
        problems.append("seed must be an integer in [0, 2**64)")
    if isinstance(raw.mc_samples, bool) or not isinstance(raw.mc_samples, int) or raw.mc_samples < 1:
        problems.append("mc_samples must be a positive integer")
    if isinstance(raw.workers, bool) or not isinstance(raw.workers, int) or raw.workers < 1:
        problems.append("workers must be a positive integer")

    if problems:
        raise ParameterError(problems)

    users = tuple(make_user_profile(u.lam, u.beta, u.psi) for u in users)
    return replace(
        raw,
        system=SystemParams(float(raw.system.p), float(raw.system.sigma2), float(raw.system.v)),
        users=users,
        quad_tol=float(raw.quad_tol),
        root_tol=float(raw.root_tol),
        psi_max=float(raw.psi_max) if raw.psi_max is not None else min(u.psi_ceiling for u in users),
    )


def symmetric_scenario(lam=0.6, beta=0.5, psi=1.0, n=9, v=0.25, p=1.0, sigma2=1.0, **settings) -> Scenario:
    """Validated symmetric scenario; the defaults are the reference setting used throughout the docs."""
    return validate_scenario(
        Scenario(SystemParams(p, sigma2, v), (UserProfile(lam, beta, psi),), n=n, **settings)
    )


def two_user_scenario(
    users: Sequence[Tuple[float, float, float]], v=0.25, p=1.0, sigma2=1.0, n=2, **settings
) -> Scenario:
    """Validated two-user scenario from ``[(lam, beta, psi), (lam, beta, psi)]``; n other than 2 is rejected."""
    profiles = tuple(UserProfile(*u) for u in users)
    return validate_scenario(Scenario(SystemParams(p, sigma2, v), profiles, n=n, **settings))
