import numpy as np
import pytest

from minkcurve.catalog import catalog_curves
from minkcurve.curves import UnitSpeedCurve, builtin_family
from minkcurve.synthetic import equiform_helix_samples

_CACHE = {}


def unit_curve(name: str) -> UnitSpeedCurve:
    """Catalog curve by name, reparametrised once per session."""
    if name not in _CACHE:
        if name == "equiform_helix":
            src = equiform_helix_samples()
        else:
            src = catalog_curves()[name]
        _CACHE[name] = UnitSpeedCurve(src)
    return _CACHE[name]


@pytest.fixture(scope="session")
def curves():
    return unit_curve


@pytest.fixture(scope="session")
def spacelike_w():
    return unit_curve("spacelike_w")


@pytest.fixture(scope="session")
def timelike_w():
    return unit_curve("timelike_w")


@pytest.fixture(scope="session")
def nonhelix():
    return unit_curve("nonhelix_control")


def interior(curve, n):
    return np.linspace(0.05, 0.95, n) * curve.length


ACCEPTANCE = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
