"""Stderr logging install."""

import logging
import sys

import pytest

from rotinv.logging_setup import LOG_FORMAT, install_logging


@pytest.fixture
def clean_root():
    root = logging.getLogger()
    before = list(root.handlers)
    level = root.level
    yield root
    for h in list(root.handlers):
        if h not in before:
            root.removeHandler(h)
            h.close()
    root.handlers[:] = before
    root.setLevel(level)


def test_install_is_idempotent(clean_root):
    install_logging("INFO")
    handler = install_logging("DEBUG")
    assert clean_root.handlers == [handler]
    assert clean_root.level == logging.DEBUG
    assert handler.formatter._fmt == LOG_FORMAT
    assert handler.stream is sys.stderr


def test_unknown_level_rejected(clean_root):
    with pytest.raises(ValueError):
        install_logging("CHATTY")
