import numpy as np
import pytest

from wignerstat import gaussian_states as gs
from wignerstat import intracule as ic
from wignerstat.wigner_core import sample_wigner

PAIR_N = 64
PAIR_HALF_WIDTH = 4.2


@pytest.fixture(scope="session")
def orbitals():
    return gs.GaussianOrbital(1.0), gs.GaussianOrbital(2.0)


@pytest.fixture(scope="session")
def pair_axes():
    return ic.pair_axes(PAIR_N, PAIR_HALF_WIDTH)


def _pair(orbitals, pair_axes, sign):
    j, k = orbitals
    func = gs.product_quasidensity(j, k) if sign == 0 else gs.pair_quasidensity(j, k, sign)
    return sample_wigner(func, *pair_axes, body_count=2)


@pytest.fixture(scope="session")
def bose_pair(orbitals, pair_axes):
    return _pair(orbitals, pair_axes, 1)


@pytest.fixture(scope="session")
def fermi_pair(orbitals, pair_axes):
    return _pair(orbitals, pair_axes, -1)


@pytest.fixture(scope="session")
def product_pair(orbitals, pair_axes):
    return _pair(orbitals, pair_axes, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """``criterion(number, title, ok, detail)`` records a PASS/FAIL line, then asserts ``ok``."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
