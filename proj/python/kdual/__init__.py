"""Koszul duality computations over prime fields, via the kd engine."""

import enum
import json
import os

from . import _kdual

REPORT_SCHEMA = _kdual.REPORT_SCHEMA


class Status(enum.IntEnum):
    PASS = 0
    FAIL = 1
    INCONCLUSIVE = 2
    INPUT_ERROR = 3


def commands():
    return list(_kdual.commands())


def _call(command, path, text, cutoff, field, polarity, emit_matrices, fmt):
    if (path is None) == (text is None):
        raise ValueError("give exactly one of path and text")
    path = "<inline>" if path is None else os.fspath(path)
    return _kdual.run(command, path, text, field, cutoff, polarity, emit_matrices, fmt)


def run(command, path=None, *, text=None, cutoff=10, field="gf:101", polarity=None, emit_matrices=False):
    """Run one command on a presentation file or inline presentation text.

    Returns (Status, report dict).
    """
    status, report = _call(command, path, text, cutoff, field, polarity, emit_matrices, "json")
    return Status(status), json.loads(report)


def run_text(command, path=None, *, text=None, cutoff=10, field="gf:101", polarity=None):
    """Like run, with the report in the text layout of the command line tool."""
    status, report = _call(command, path, text, cutoff, field, polarity, False, "text")
    return Status(status), report


__all__ = ["REPORT_SCHEMA", "Status", "commands", "run", "run_text"]
