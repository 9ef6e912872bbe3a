import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = {}
_CRITERIA = range(1, 10)


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion."""
    def record(num, ok, detail):
        _ACCEPTANCE[num] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in _CRITERIA:
        ok, detail = _ACCEPTANCE.get(k, (False, "did not complete"))
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
