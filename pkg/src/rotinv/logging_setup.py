"""
Stderr logging for the CLI.

Stdout carries only command documents, so the root handler writes to stderr.
Safe to call multiple times: each call replaces the root handler.
"""

from __future__ import annotations

import logging
import sys

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def install_logging(level: str | int = "WARNING") -> logging.Handler:
    if isinstance(level, str):
        numeric = logging.getLevelName(level.upper())
        if not isinstance(numeric, int):
            raise ValueError(f"unknown log level {level!r}")
        level = numeric
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    return logging.getLogger().handlers[-1]
