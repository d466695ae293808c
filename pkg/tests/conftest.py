import numpy as np
import pytest

from noisyflood.cli import main

_REPORT = []


@pytest.fixture(scope="session")
def report():
    def record(criterion, ok, detail):
        _REPORT.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def scenario1_dir(tmp_path_factory):
    """Full bundled scenario 1 at seed 42, shared by the CLI and acceptance tests."""
    out = tmp_path_factory.mktemp("scenario1")
    assert main(["run", "scenario1.cfg", "--seed", "42", "--out", str(out)]) == 0
    return out


class ScriptedStream:
    """Returns a fixed sequence of uniforms; fails loudly if it runs dry."""

    def __init__(self, values):
        self.values = list(values)
        self.used = 0

    def random(self, size=None):
        if size is not None:
            raise TypeError("scripted stream only serves scalar draws")
        v = self.values[self.used]
        self.used += 1
        return v


@pytest.fixture
def scripted():
    return ScriptedStream


def random_positions(rng, n, width=600.0, height=600.0):
    return rng.random((n, 2)) * (width, height)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
