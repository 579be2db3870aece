"""
Scenario files.

A scenario file holds ``key = value`` lines; ``#`` starts a comment and blank
lines are skipped. Any of ``lambda1, lambda2, beta1, beta2, psi1, psi2``
switches to the two-user game.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional

import numpy as np

from ..errors import ParameterError
from ..model import Scenario, symmetric_scenario, two_user_scenario, validate_scenario

logger = logging.getLogger(__name__)

SYMMETRIC_DEFAULTS = {"lambda": 0.6, "beta": 0.5, "psi": 1.0}
COMMON_DEFAULTS = {"v": 0.25, "p": 1.0, "sigma2": 1.0, "n": 9}
SETTING_KEYS = ("quad_tol", "root_tol", "psi_max", "seed", "mc_samples", "workers")
TWO_USER_KEYS = ("lambda1", "lambda2", "beta1", "beta2", "psi1", "psi2")
INTEGER_KEYS = ("n", "seed", "mc_samples", "workers")
KNOWN_KEYS = tuple(SYMMETRIC_DEFAULTS) + tuple(COMMON_DEFAULTS) + SETTING_KEYS + TWO_USER_KEYS
SWEEP_PARAMETERS = ("psi", "n", "v")
SIGNIFICANT_DIGITS = 9


def parse_config(text: str) -> Dict[str, float]:
    """
    Parse scenario text into a key-value map.

    :raises ParameterError: naming every unknown key, malformed line and non-numeric value
    """
    values: Dict[str, float] = {}
    problems: List[str] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {number}: expected 'key = value', got {line!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            problems.append(f"line {number}: unknown key {key!r}")
            continue
        try:
            number_value = float(value)
        except ValueError:
            problems.append(f"{key} must be a number, got {value!r}")
            continue
        if key in INTEGER_KEYS:
            if not math.isfinite(number_value) or number_value != int(number_value):
                problems.append(f"{key} must be an integer, got {value!r}")
                continue
            number_value = int(number_value)
        values[key] = number_value
    if problems:
        raise ParameterError(problems)
    return values


def scenario_from_values(values: Dict[str, float]) -> Scenario:
    """Build a validated scenario, filling absent keys with the defaults."""
    settings = {k: values[k] for k in SETTING_KEYS if k in values}
    common = {k: values.get(k, default) for k, default in COMMON_DEFAULTS.items()}
    if any(k in values for k in TWO_USER_KEYS):
        stray = [k for k in SYMMETRIC_DEFAULTS if k in values]
        if stray:
            raise ParameterError(f"symmetric keys {', '.join(stray)} cannot be mixed with two-user keys")
        users = [
            tuple(values.get(f"{name}{i}", SYMMETRIC_DEFAULTS[name]) for name in ("lambda", "beta", "psi"))
            for i in (1, 2)
        ]
        n = values.get("n", 2)
        return two_user_scenario(users, v=common["v"], p=common["p"], sigma2=common["sigma2"], n=n, **settings)
    profile = {k: values.get(k, default) for k, default in SYMMETRIC_DEFAULTS.items()}
    return symmetric_scenario(
        lam=profile["lambda"], beta=profile["beta"], psi=profile["psi"], **common, **settings
    )


def load_scenario(path: Optional[str]) -> Scenario:
    """
    Read a scenario file, or the default scenario when ``path`` is ``None``.

    :raises ParameterError: when the file cannot be read or holds invalid values
    """
    if path is None:
        return scenario_from_values({})
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ParameterError(f"cannot read config {path}: {e.strerror or e}")
    logger.debug(f"loaded scenario from {path}")
    return scenario_from_values(parse_config(text))


def with_settings(scenario: Scenario, **settings) -> Scenario:
    """Override numerical settings from command-line options; ``None`` keeps the file's value."""
    changes = {k: v for k, v in settings.items() if v is not None}
    if not changes:
        return scenario
    return validate_scenario(replace(scenario, **changes))


def round_significant(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round to the precision the CSV writer prints."""
    return float(format(x, f".{digits}g"))


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter grid over a base scenario, endpoints included."""

    parameter: str
    start: float
    stop: float
    steps: int
    scenario: Scenario

    def __post_init__(self):
        problems = []
        if self.parameter not in SWEEP_PARAMETERS:
            problems.append(f"param must be one of {', '.join(SWEEP_PARAMETERS)}, got {self.parameter!r}")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2:
            problems.append(f"steps must be an integer of at least 2, got {self.steps!r}")
        if not self.start < self.stop:
            problems.append(f"from must be below to, got {self.start} and {self.stop}")
        if self.scenario.two_user:
            problems.append("sweeps run on the symmetric game")
        if not problems and self.parameter == "n":
            grid = np.linspace(self.start, self.stop, self.steps)
            if not np.allclose(grid, np.round(grid)):
                problems.append("an n sweep needs integer grid points: (to - from) / (steps - 1) must be whole")
        if problems:
            raise ParameterError(problems)

    def values(self) -> List[float]:
        grid = np.linspace(self.start, self.stop, self.steps)
        if self.parameter == "n":
            return [int(round(x)) for x in grid]
        return [round_significant(float(x)) for x in grid]

    def at(self, value) -> Scenario:
        """The base scenario with the swept parameter set to ``value``."""
        if self.parameter == "psi":
            return self.scenario.with_psi(value)
        if self.parameter == "n":
            return self.scenario.with_n(int(value))
        return self.scenario.with_system(v=value)
