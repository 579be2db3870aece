"""Command-line front end: configuration files, commands and CSV output."""
from ..logging import log

logger = log.setup_custom_logger(name=__name__, level="INFO", file="../logs/cli.log")

logger.debug("created cli.log log file")
