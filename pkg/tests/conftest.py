import pytest

from enzpair.dispersion import ConstantIndexMaterial, material_preset
from enzpair.modulation import PumpPulse

FS = 1e-15


@pytest.fixture(scope="session")
def ito():
    return material_preset("ito-luk2015")


@pytest.fixture(scope="session")
def vacuum():
    return ConstantIndexMaterial(1.0)


@pytest.fixture
def weak_pulse():
    return PumpPulse(tau=5 * FS, delta_r=1e-3)


_VERDICTS: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _VERDICTS.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
