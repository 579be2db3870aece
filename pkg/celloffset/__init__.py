"""Solver and simulator for the WiFi/3G association game under a broadcast CQI threshold."""
__version__ = "0.1.0"

try:
    from . import model
    from . import engine

    from .logging import log

    logger = log.setup_custom_logger(name=__name__, level="INFO", file="./logs/app.log")

    logger.debug("created app.log log file")

except Exception as e:
    print(f"failed to load submodules, reason: {e}")
