import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from revival_lab.hamiltonian import EnergyPoint, OscillatorPair, PolynomialF  # noqa: E402
from revival_lab.wavepacket import PacketParams  # noqa: E402

ACCEPTANCE = []


def record(number, ok, detail):
    ACCEPTANCE.append((number, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number:>3}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def quad_f():
    return PolynomialF.from_terms([(2, 0, 1), (1, 1, 1), (0, 2, 1)])


@pytest.fixture
def unit_osc():
    return OscillatorPair(1.0, 1.0)


@pytest.fixture
def centre():
    return EnergyPoint(0.5, 0.5)


@pytest.fixture
def params08():
    return PacketParams(0.8, 0.8, 0.6, 0.6)


SQRT2 = math.sqrt(2.0)
GOLDEN = (1 + math.sqrt(5.0)) / 2
