import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def eig_oracle_norm(m):
    """Largest singular value from a dense Hermitian eigen-solve of M* M."""
    m = np.asarray(m, dtype=complex)
    return float(np.sqrt(max(np.linalg.eigvalsh(np.conj(m.T) @ m)[-1], 0.0)))


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marks = dict(report.user_properties)
    n = marks.get("criterion")
    if n is not None:
        _criteria[n] = ("PASS" if report.passed else "FAIL", marks.get("detail", ""))


@pytest.fixture(autouse=True)
def _criterion_number(request, record_property):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        record_property("criterion", mark.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, detail = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
