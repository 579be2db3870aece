import enum
import logging
import os

LOG_DIR_ENV = "CELLOFFSET_LOG_DIR"


class log_levels(enum.Enum):
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL

    @classmethod
    def parse(cls, name):
        """
        Look up a level by name, case insensitive.

        :param name: one of DEBUG, INFO, WARNING, ERROR, CRITICAL
        :return: the numeric logging level
        """
        try:
            return cls[str(name).upper()].value
        except KeyError:
            raise ValueError(f"log-level must be one of {', '.join(m.name for m in cls)}, got {name!r}")


def _resolve_log_path(file):
    base = os.environ.get(LOG_DIR_ENV)
    if base:
        return os.path.normpath(os.path.join(base, os.path.basename(file)))
    return os.path.normpath(os.path.join(os.path.dirname(__file__), file))


def setup_custom_logger(
    name,
    level,
    file,
    format="[%(asctime)s] %(name)s %(levelname)s - %(message)s",
    console_logging=False,
):
    """
    Create or fetch a named logger writing to a log file.

    :param name: logger name, usually the package ``__name__``
    :param level: logging level name or number
    :param file: log file path, relative to this directory unless CELLOFFSET_LOG_DIR is set
    :param format: record format shared by every handler
    :param console_logging: also log to stderr
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    logger_formatter = logging.Formatter(format)

    if not any(isinstance(h, (logging.FileHandler, logging.NullHandler)) for h in logger.handlers):
        log_path = _resolve_log_path(file)
        try:
            os.makedirs(os.path.dirname(log_path), exist_ok=True)
            logger_handler = logging.FileHandler(log_path)
            logger_handler.setLevel(level)
            logger_handler.setFormatter(logger_formatter)
        except OSError:
            # read-only installs still import
            logger_handler = logging.NullHandler()
        logger.addHandler(logger_handler)

    if console_logging and not any(type(h) is logging.StreamHandler for h in logger.handlers):
        console_logger_handler = logging.StreamHandler()
        console_logger_handler.setLevel(level)
        console_logger_handler.setFormatter(logger_formatter)
        logger.addHandler(console_logger_handler)

    return logger


def set_package_level(package, level, console_logging=False):
    """
    Apply ``level`` to every logger and handler under ``package``.

    :param package: root logger name, e.g. ``"celloffset"``
    :param level: numeric logging level
    :param console_logging: also attach a stderr handler to the root package logger
    """
    names = [name for name in logging.Logger.manager.loggerDict if name == package or name.startswith(package + ".")]
    for name in names:
        logger = logging.getLogger(name)
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
    if console_logging:
        setup_custom_logger(package, level, "./logs/app.log", console_logging=True)
