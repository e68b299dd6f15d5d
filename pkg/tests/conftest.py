import os
import time

import pytest
from hypothesis import HealthCheck, settings

from linkcat.lietype import flag_gposet
from linkcat.quotcat import build_category

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


class Case:
    """A flag G-poset with its two categories, built lazily."""

    def __init__(self, n, p):
        self.n, self.p = n, p
        self.P = flag_gposet(n, p)
        self.G = self.P.group
        self._rbs = self._bs = None

    @property
    def Prbs(self):
        return self.P

    @property
    def Pbs(self):
        return self.P.with_trivial_links()

    @property
    def rbs(self):
        if self._rbs is None:
            self._rbs = build_category(self.P)
        return self._rbs

    @property
    def bs(self):
        if self._bs is None:
            self._bs = build_category(self.Pbs)
        return self._bs

    def __repr__(self):
        return f"GL{self.n}(F{self.p})"


@pytest.fixture(scope="session")
def gl22():
    return Case(2, 2)


@pytest.fixture(scope="session")
def gl23():
    return Case(2, 3)


@pytest.fixture(scope="session")
def gl32():
    return Case(3, 2)


# ------------------------------------------------------- acceptance reporting

_ACCEPTANCE = pytest.StashKey[list]()


class _Criterion:
    def __init__(self, log, number, title, limit):
        self.log, self.number, self.title, self.limit = log, number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        line = (f"criterion {self.number}: {'PASS' if ok else 'FAIL'} "
                f"({elapsed:.1f}s, limit {self.limit:.0f}s) {self.title}")
        self.log.append(line)
        print(line)
        if exc_type is None:
            assert elapsed < self.limit, f"took {elapsed:.1f}s, limit {self.limit}s"
        return False


@pytest.fixture
def criterion(request):
    log = request.config.stash.setdefault(_ACCEPTANCE, [])
    return lambda number, title, limit: _Criterion(log, number, title, limit)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
