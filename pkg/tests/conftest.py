import math

import pytest

from sppfriction.config import SystemConfig

SILVER_OMEGA_SP = 2.0 * math.pi * 646e12
DISTANCE = 3e-9
DIPOLE = 1e-29


def make_config(a, b, *, d=DISTANCE, gamma_eg=DIPOLE, v_sign=1.0):
    """Configuration with normalized parameters (a, b) for the silver resonance."""
    return SystemConfig.from_normalized(a, b, omega_sp=SILVER_OMEGA_SP, d=d, gamma_eg=gamma_eg, v_sign=v_sign)


@pytest.fixture
def report(capsys):
    """Print a line that survives pytest's output capture."""

    def emit(line):
        with capsys.disabled():
            print(line)

    return emit
