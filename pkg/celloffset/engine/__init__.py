"""Channel-utility engine: c-functions and conditional expectations."""
from ..logging import log

logger = log.setup_custom_logger(name=__name__, level="INFO", file="../logs/engine.log")

logger.debug("created engine.log log file")

from .utility import (  # noqa: E402
    UNCONDITIONED,
    ScenarioUtilities,
    UtilityTable,
    c_cc_two_user,
    c_multi,
    c_wc_two_user,
    c_ww,
    conditional_utility,
    erlang_interference_expectation,
    interference_mixture,
    state_probability,
    unconditional_utility,
)
