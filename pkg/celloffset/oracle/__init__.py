"""Monte-Carlo estimates of the analytic utilities, used as an independent check."""
from ..logging import log

logger = log.setup_custom_logger(name=__name__, level="INFO", file="../logs/oracle.log")

logger.debug("created oracle.log log file")
