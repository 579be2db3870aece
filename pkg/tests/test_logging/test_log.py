import logging
import os
from unittest import mock

import pytest

from celloffset.logging import log


def test_log_levels_parse():
    assert log.log_levels.parse("debug") == logging.DEBUG
    assert log.log_levels.parse("WARNING") == logging.WARNING
    with pytest.raises(ValueError) as info:
        log.log_levels.parse("LOUD")
    assert "LOUD" in str(info.value)


def test_log_dir_from_environment(tmp_path):
    with mock.patch.dict(os.environ, {log.LOG_DIR_ENV: str(tmp_path)}):
        logger = log.setup_custom_logger("celloffset_test.envdir", "INFO", "../logs/envdir.log")
    handler = logger.handlers[0]
    assert isinstance(handler, logging.FileHandler)
    assert handler.baseFilename == os.path.join(str(tmp_path), "envdir.log")
    handler.close()


def test_unwritable_log_dir_falls_back_to_null_handler(tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("")
    with mock.patch.dict(os.environ, {log.LOG_DIR_ENV: str(blocker / "sub")}):
        logger = log.setup_custom_logger("celloffset_test.readonly", "INFO", "x.log")
    assert isinstance(logger.handlers[0], logging.NullHandler)


def test_handlers_are_not_duplicated(tmp_path):
    with mock.patch.dict(os.environ, {log.LOG_DIR_ENV: str(tmp_path)}):
        first = log.setup_custom_logger("celloffset_test.once", "INFO", "once.log", console_logging=True)
        again = log.setup_custom_logger("celloffset_test.once", "INFO", "once.log", console_logging=True)
    assert first is again
    assert len(again.handlers) == 2
    for handler in again.handlers:
        handler.close()


def test_set_package_level_reaches_children(tmp_path):
    with mock.patch.dict(os.environ, {log.LOG_DIR_ENV: str(tmp_path)}):
        parent = log.setup_custom_logger("celloffset_levels", "INFO", "levels.log")
    child = logging.getLogger("celloffset_levels.child")
    log.set_package_level("celloffset_levels", logging.ERROR)
    assert parent.level == logging.ERROR
    assert child.level == logging.ERROR
    assert all(h.level == logging.ERROR for h in parent.handlers)
    for handler in parent.handlers:
        handler.close()
