"""
Logging Setup

All modules log through children of the "lens_synth" logger so a single
handler controls the output of the library, the CLI and the MCP server.
"""

import logging
import sys

ROOT_NAME = "lens_synth"

_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def _root() -> logging.Logger:
    root = logging.getLogger(ROOT_NAME)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False
    return root


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger under the lens_synth namespace.

    Args:
        name: Usually the module's __name__

    Returns:
        A configured logging.Logger
    """
    _root()
    short = name.rsplit(".", 1)[-1]
    return logging.getLogger(f"{ROOT_NAME}.{short}")


def set_level(level: str) -> None:
    """Set the level for every lens_synth logger (e.g. "DEBUG", "INFO")"""
    _root().setLevel(level.upper())
