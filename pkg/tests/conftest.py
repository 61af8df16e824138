import numpy as np
import pytest

from qchan.channels import ChannelKind

CATALOG = [k for k in ChannelKind if k is not ChannelKind.CUSTOM]
QUBIT_CATALOG = [k for k in CATALOG if k is not ChannelKind.ERASURE]


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for name, value in report.user_properties:
        if name == "acceptance":
            _ACCEPTANCE.append((value, report.passed))


_ACCEPTANCE: list[tuple[str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
