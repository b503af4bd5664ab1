import os
import sys
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from flrs.field import FieldContext  # noqa: E402

_ACCEPTANCE = {}


@lru_cache(maxsize=None)
def context(q, m, u=1, d=0):
    return FieldContext(q, m, u, d)


class AcceptanceLog:
    def record(self, name, passed, detail=""):
        _ACCEPTANCE[name] = (bool(passed), detail)


@pytest.fixture
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
