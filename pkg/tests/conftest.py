import contextlib
from pathlib import Path

import pytest

from qfclink.dispersion import load_model, load_shipped_model
from qfclink.phasematching import CrystalSpec, ProcessSpec, qpm_period

DATA = Path(__file__).parent / "data"
REPO = Path(__file__).parent.parent

OP_T_C = 160.0
OP_IN_NM = 1547.6
OP_PUMP_NM = 579.6
OP_LENGTH_MM = 19.97


@pytest.fixture(scope="session")
def shipped():
    return load_shipped_model()


@pytest.fixture(scope="session")
def constant():
    return load_model(DATA / "constant_index.json")


@pytest.fixture(scope="session")
def sfg_process():
    return ProcessSpec.from_inputs("SFG", OP_IN_NM, OP_PUMP_NM)


@pytest.fixture(scope="session")
def sfg_crystal(shipped, sfg_process):
    period = qpm_period(sfg_process, shipped, OP_T_C, extrapolate=True)
    return CrystalSpec(OP_LENGTH_MM, period, OP_T_C, shipped, allow_extrapolation=True)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance(request, capsys):
    """Record one PASS/FAIL line for an acceptance criterion.

    Use as ``with acceptance(n, title) as note:``; ``note(text)`` attaches
    the achieved values to the line.
    """
    @contextlib.contextmanager
    def criterion(number, title):
        details = []
        status = "FAIL"
        try:
            yield details.append
            status = "PASS"
        finally:
            line = f"[{status}] criterion {number:>2}: {title}"
            if details:
                line += " | " + "; ".join(details)
            ACCEPTANCE_LINES.append(line)
            with capsys.disabled():
                print("\n" + line)

    return criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
