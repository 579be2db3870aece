"""Domain types and parameter validation."""
from ..logging import log

logger = log.setup_custom_logger(name=__name__, level="INFO", file="../logs/model.log")

logger.debug("created model.log log file")

from .core import (  # noqa: E402
    PSI_MAX_DECAY,
    STATES,
    Policy,
    PolicyStatistics,
    Profile,
    Scenario,
    SystemParams,
    UserProfile,
    make_user_profile,
    symmetric_scenario,
    two_user_scenario,
    validate_scenario,
)
