import pytest

from qdapulse.model import SiteSystem, diagonalize
from qdapulse.pulse import ExpPulse


def make_frame(j=0.5, gamma_b=1.0, delta_ab=0.0, omega_bar=0.0):
    return diagonalize(SiteSystem.from_ratios(j, gamma_b, delta_ab, omega_bar=omega_bar))


def make_pulse(frame, delta_l, linewidth):
    return ExpPulse.at_detuning(frame, delta_l, linewidth)


@pytest.fixture
def sym_frame():
    return make_frame(0.5)
