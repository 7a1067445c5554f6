import logging
import sys

import pytest

from src.config import settings
from src.utils.logger import (
    COLORS,
    RESET,
    HANDLER_NAME,
    ROOT,
    ColoredFormatter,
    _level_from_string,
    logger,
    qualified_name,
)


def _record(level: int = logging.WARNING) -> logging.LogRecord:
    return logging.LogRecord(
        name="keller-dynamics.flow",
        level=level,
        pathname="",
        lineno=0,
        msg="step %d diverged",
        args=(42,),
        exc_info=None,
    )


@pytest.mark.parametrize(
    "name, level",
    [
        ("DEBUG", logging.DEBUG),
        ("warning", logging.WARNING),
        ("CRITICAL", logging.CRITICAL),
        ("verbose", logging.INFO),
        ("", logging.INFO),
    ],
)
def test_level_from_string(name: str, level: int) -> None:
    assert _level_from_string(name) == level


# ============================================================================
# Formatter
# ============================================================================


def test_formatter_colours_level_name() -> None:
    formatted = ColoredFormatter(fmt="%(levelname)s: %(message)s").format(_record())
    assert formatted == f"{COLORS['WARNING']}WARNING{RESET}: step 42 diverged"


def test_formatter_plain_when_colour_disabled() -> None:
    formatter = ColoredFormatter(fmt="%(levelname)s: %(message)s", use_color=False)
    assert formatter.format(_record()) == "WARNING: step 42 diverged"


def test_formatter_leaves_record_untouched() -> None:
    record = _record(logging.ERROR)
    ColoredFormatter().format(record)
    assert record.levelname == "ERROR"


# ============================================================================
# Logger hierarchy
# ============================================================================


@pytest.mark.parametrize(
    "name, expected",
    [
        ("src.flow.services.flow_service", "keller-dynamics.flow.services.flow_service"),
        ("src", ROOT),
        (ROOT, ROOT),
        ("keller-dynamics.galois", "keller-dynamics.galois"),
        ("__main__", "keller-dynamics.__main__"),
    ],
)
def test_qualified_name(name: str, expected: str) -> None:
    assert qualified_name(name) == expected


def test_module_loggers_share_one_stderr_handler() -> None:
    log = logger("src.galois.services.galois_service")
    again = logger("src.galois.services.galois_service")
    root = logger()

    assert log is again
    assert log.name == "keller-dynamics.galois.services.galois_service"
    assert log.handlers == []
    ancestor = log
    while ancestor is not root and ancestor.parent is not None:
        ancestor = ancestor.parent
    assert ancestor is root
    assert root.name == ROOT
    assert not root.propagate

    ours = [h for h in root.handlers if h.get_name() == HANDLER_NAME]
    assert len(ours) == 1
    handler = ours[0]
    assert isinstance(handler, logging.StreamHandler)
    assert isinstance(handler.formatter, ColoredFormatter)
    assert handler.stream is not sys.stdout


def test_root_level_follows_settings() -> None:
    assert logger().level == _level_from_string(settings.logging_level)


def test_repeated_lookups_keep_a_single_package_handler() -> None:
    root = logger()
    foreign = logging.NullHandler()
    root.addHandler(foreign)
    try:
        for name in ("src.flow", "src.jacrep.services.identity_service", ROOT):
            logger(name)
        named = [h for h in root.handlers if h.get_name() == HANDLER_NAME]
        assert len(named) == 1
        assert foreign in root.handlers
    finally:
        root.removeHandler(foreign)
