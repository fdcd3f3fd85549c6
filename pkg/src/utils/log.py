from __future__ import annotations

import logging
import sys

from env_utils import get_env_str

FORMAT = "[%(levelname)s] %(name)s: %(message)s"
ROOT = "slk"

_configured = False


def _configure() -> None:
    global _configured
    if _configured:
        return
    root = logging.getLogger(ROOT)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(FORMAT))
    root.addHandler(handler)
    level = logging.getLevelName(get_env_str("SLK_LOG_LEVEL", "WARNING").upper())
    root.setLevel(level if isinstance(level, int) else logging.WARNING)
    root.propagate = False
    _configured = True


def get_logger(name: str) -> logging.Logger:
    _configure()
    return logging.getLogger(f"{ROOT}.{name}")


def set_verbosity(verbose: int) -> None:
    """0 keeps the configured level, 1 is INFO, 2 or more is DEBUG."""
    _configure()
    if verbose >= 2:
        logging.getLogger(ROOT).setLevel(logging.DEBUG)
    elif verbose == 1:
        logging.getLogger(ROOT).setLevel(logging.INFO)
