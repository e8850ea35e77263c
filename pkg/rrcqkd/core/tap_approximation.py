"""Sample-and-hold, truncated approximation u(t) of the RRC pulse."""

import logging
import math
from functools import lru_cache

import numpy as np

from rrcqkd.core.rrc_shaping import rrc_amplitude
from rrcqkd.errors import DegeneratePulseError
from rrcqkd.models import ApproxPulse, RrcPulse, TapGrid, TapProfile
from rrcqkd.models.pulse import SAMPLING_MODES

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def build_taps(
    pulse: RrcPulse, grid: TapGrid, sampling: str = "center", quadrature_order: int = 16
) -> TapProfile:
    """
    Sample v(t) once per hold interval.

    ``sampling`` picks the hold value: ``center`` takes v at the interval
    centre, ``left`` at its left edge, ``average`` the interval mean of v.
    """
    if not math.isclose(pulse.symbol_period, grid.symbol_period, rel_tol=1e-12):
        raise ValueError("pulse and tap grid use different symbol periods")
    if sampling not in SAMPLING_MODES:
        raise ValueError(f"sampling must be one of {SAMPLING_MODES}, got {sampling!r}")

    half = grid.sample_spacing / 2.0
    if sampling == "center":
        values = rrc_amplitude(grid.centers, pulse)
    elif sampling == "left":
        values = rrc_amplitude(grid.centers - half, pulse)
    else:
        nodes, weights = gauss_legendre(quadrature_order)
        t = grid.centers[:, None] + half * nodes[None, :]
        values = rrc_amplitude(t, pulse) @ weights / 2.0

    logger.debug(
        "built %s taps at %s sps (rho=%s, sampling=%s)",
        grid.total_taps,
        grid.samples_per_symbol,
        pulse.rolloff,
        sampling,
    )
    return TapProfile(tuple(float(v) for v in values), grid)


def normalize(taps: TapProfile) -> ApproxPulse:
    """Scale the piecewise-constant profile to unit energy."""
    energy = taps.grid.sample_spacing * float(np.sum(taps.array**2))
    if energy == 0.0:
        raise DegeneratePulseError()
    return ApproxPulse(taps=taps, norm=1.0 / math.sqrt(energy))


def approximate_pulse(
    pulse: RrcPulse, grid: TapGrid, sampling: str = "center", quadrature_order: int = 16
) -> ApproxPulse:
    return normalize(build_taps(pulse, grid, sampling, quadrature_order))
