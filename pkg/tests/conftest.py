import os

import pytest

os.environ.setdefault("ENVIRONMENT", "testing")

from rrcqkd.core.overlap import overlap_coefficients  # noqa: E402
from rrcqkd.core.tap_approximation import approximate_pulse  # noqa: E402
from rrcqkd.models import RrcPulse, TapConfig, TapGrid  # noqa: E402


@pytest.fixture(scope="session")
def reference_pulse():
    """The operating point highlighted in the published table: rho=0.25, 3 sps, 21 taps."""
    v = RrcPulse(0.25)
    u = approximate_pulse(v, TapGrid(3, 21))
    return u, v


@pytest.fixture(scope="session")
def reference_overlap(reference_pulse):
    u, v = reference_pulse
    return overlap_coefficients(u, v)


@pytest.fixture
def tap_config():
    return TapConfig(samples_per_symbol=3, total_taps=21)
