import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lagfem.config import parse_config  # noqa: E402

ACCEPTANCE_LINES = []


def preset_config(N, beta=1.0, t_end=0.05, presets=("gaussian_theta",), **control):
    return parse_config({
        "mesh": {"L": 1.0, "N": N},
        "params": {"K": 1.0, "mu_bar": 1.0, "kappa_bar": 1.0, "alpha": 0.0, "beta": beta},
        "control": {"t_end": t_end, **control},
        "ic": {"presets": [{"name": p} for p in presets]},
    })


@pytest.fixture
def make_config():
    return preset_config


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
