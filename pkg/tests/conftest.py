import os
import subprocess
import sys
from pathlib import Path

import pytest

from app.cavity.fabry_perot_functions import cavity_coefficients
from app.cavity.fabry_perot_functions import ideal_cavity
from app.cavity.model import CavityParams
from app.experiments.constants import R0
from app.sweep.ledger_model import load_reference_points

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def reference_points():
    return load_reference_points()


@pytest.fixture
def golden_cavity():
    return ideal_cavity(R0)


@pytest.fixture(scope="session")
def physical_cavity():
    return cavity_coefficients(CavityParams(e_a=3.0, tau=1.5, p=1.0))


@pytest.fixture
def run_cli():
    """Runs `python -m app` from the repository root and captures its output."""

    def run(*args, env=None):
        cmd = [sys.executable, "-m", "app", *[str(arg) for arg in args]]
        return subprocess.run(cmd, cwd=ROOT, capture_output=True, text=True, env={**os.environ, **(env or {})})

    return run
