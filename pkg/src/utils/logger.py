import logging
import sys

from src.config import settings

ROOT = "keller-dynamics"

# ANSI color codes
COLORS = {
    "DEBUG": "\033[36m",  # Cyan
    "INFO": "\033[32m",  # Green
    "WARNING": "\033[33m",  # Yellow
    "ERROR": "\033[31m",  # Red
    "CRITICAL": "\033[35m",  # Magenta
}
RESET = "\033[0m"

HANDLER_NAME = "keller-dynamics-stderr"

LOG_FORMAT = "[%(levelname)s] %(asctime)s %(name)s - %(message)s"
DATEFMT = "%H:%M:%S"


class ColoredFormatter(logging.Formatter):
    """Colours the level name only, and only when `use_color` is set."""

    def __init__(
        self, fmt: str = LOG_FORMAT, datefmt: str = DATEFMT, use_color: bool = True
    ) -> None:
        super().__init__(fmt=fmt, datefmt=datefmt)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        levelname = record.levelname
        if self.use_color and levelname in COLORS:
            record.levelname = f"{COLORS[levelname]}{levelname}{RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


def _level_from_string(level_str: str) -> int:
    """Numeric level for a name such as "DEBUG"; INFO when unknown."""
    if not level_str:
        return logging.INFO
    level = getattr(logging, level_str.upper(), logging.INFO)
    return level if isinstance(level, int) else logging.INFO


def qualified_name(name: str) -> str:
    """`src.flow.services.flow_service` -> `keller-dynamics.flow.services.flow_service`."""
    if name == ROOT or name.startswith(ROOT + "."):
        return name
    if name == "src":
        return ROOT
    if name.startswith("src."):
        name = name[len("src.") :]
    return f"{ROOT}.{name}"


def _root() -> logging.Logger:
    root = logging.getLogger(ROOT)
    if not any(h.get_name() == HANDLER_NAME for h in root.handlers):
        lvl = _level_from_string(settings.logging_level)
        root.setLevel(lvl)

        # stdout belongs to command output
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name(HANDLER_NAME)
        handler.setLevel(lvl)
        handler.setFormatter(ColoredFormatter(use_color=sys.stderr.isatty()))

        root.addHandler(handler)
        root.propagate = False
    return root


def logger(name: str = ROOT) -> logging.Logger:
    """
    Logger under the package root. Every module logger shares the root's
    single stderr handler, so worker processes and repeated imports never
    duplicate output.

    Usage:
        from src.utils.logger import logger
        log = logger(__name__)
    """
    root = _root()
    qualified = qualified_name(name)
    return root if qualified == ROOT else logging.getLogger(qualified)
