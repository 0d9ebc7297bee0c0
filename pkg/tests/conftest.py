from __future__ import annotations

from fractions import Fraction as F

import pytest

from alphahurwitz.cf_core import Alpha
from alphahurwitz.partition import closure

REGRESSION_ALPHAS = [
    (F(1, 2), F(1, 2)),
    (F(2, 3), F(1, 2)),
    (F(2, 3), F(2, 3)),
    (F(1, 5), F(3, 5)),
    (F(1, 3), F(1, 2)),
]

_closures: dict = {}


def cached_closure(a1, a2):
    key = (F(a1), F(a2))
    if key not in _closures:
        _closures[key] = closure(Alpha(*key))
    return _closures[key]


@pytest.fixture(scope="session")
def hurwitz():
    return Alpha(F(1, 2), F(1, 2))


@pytest.fixture(scope="session")
def hurwitz_closure():
    return cached_closure(F(1, 2), F(1, 2))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k.split()[0][1:])):
        ok, note = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  [{note}]")
