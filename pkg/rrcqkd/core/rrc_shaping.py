"""
Ideal root-raised-cosine receiver mode v(t) and its raised-cosine power
spectrum |V(f)|^2, plus the spectral no-ISI check.
"""

import logging
import math

import numpy as np
from scipy import integrate

from rrcqkd.models import RrcPulse, SpectralProfile

logger = logging.getLogger(__name__)

# Relative distance (in symbol periods) below which the 0/0 points of the
# closed form are replaced by their limits.
SINGULAR_THRESHOLD = 1e-6
MAX_ORTHOGONALITY_LAG = 64


def _center_limit(rolloff):
    return 1.0 + rolloff * (4.0 / math.pi - 1.0)


def _edge_limit(rolloff):
    arg = math.pi / (4.0 * rolloff)
    return (rolloff / math.sqrt(2.0)) * (
        (1.0 + 2.0 / math.pi) * math.sin(arg) + (1.0 - 2.0 / math.pi) * math.cos(arg)
    )


def rrc_amplitude(t, pulse: RrcPulse):
    """
    Evaluate the unit-energy RRC pulse at time(s) ``t``.

    Args:
        t (float or array_like): time in the same unit as ``pulse.symbol_period``.
        pulse (RrcPulse): roll-off and symbol period.

    Returns:
        float or np.ndarray: v(t) in units of 1/sqrt(T), same shape as ``t``.
    """
    rho = pulse.rolloff
    t = np.asarray(t, dtype=float)
    # v is even; evaluating on |t| keeps v(t) == v(-t) bit for bit.
    x = np.abs(t).reshape(-1) / pulse.symbol_period
    out = np.empty_like(x)

    near_zero = x < SINGULAR_THRESHOLD
    edge_time = pulse.singular_time
    if edge_time is not None:
        near_edge = np.abs(x - edge_time / pulse.symbol_period) < SINGULAR_THRESHOLD
    else:
        near_edge = np.zeros_like(near_zero)
    regular = ~(near_zero | near_edge)

    xr = x[regular]
    numerator = np.sin(np.pi * xr * (1.0 - rho)) + 4.0 * rho * xr * np.cos(np.pi * xr * (1.0 + rho))
    denominator = np.pi * xr * (1.0 - (4.0 * rho * xr) ** 2)
    out[regular] = numerator / denominator
    out[near_zero] = _center_limit(rho)
    if edge_time is not None:
        out[near_edge] = _edge_limit(rho)

    out /= math.sqrt(pulse.symbol_period)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def rrc_spectrum_power(f, pulse: RrcPulse):
    """Raised-cosine |V(f)|^2: flat T in the passband, cosine edge, zero beyond."""
    profile = SpectralProfile.of(pulse)
    T, rho = pulse.symbol_period, pulse.rolloff
    f = np.asarray(f, dtype=float)
    fa = np.abs(f).reshape(-1)
    out = np.zeros_like(fa)

    out[fa <= profile.passband_edge] = T
    edge = (fa > profile.passband_edge) & (fa <= profile.stopband_edge)
    if rho > 0.0:
        phase = np.pi * T / rho * (fa[edge] - profile.passband_edge)
        out[edge] = 0.5 * T * (1.0 + np.cos(phase))
    return float(out[0]) if f.ndim == 0 else out.reshape(f.shape)


def orthogonality_defect(pulse: RrcPulse, j: int) -> float:
    """
    Inner product <v(t), v(t - jT)> computed as the integral of
    cos(2 pi j f T) |V(f)|^2 over the finite spectral support.

    Should equal 1 for j == 0 and 0 otherwise.
    """
    if abs(j) > MAX_ORTHOGONALITY_LAG:
        raise ValueError(f"lag |j| must be <= {MAX_ORTHOGONALITY_LAG}, got {j}")

    profile = SpectralProfile.of(pulse)
    T = pulse.symbol_period
    f1, f2 = profile.passband_edge, profile.stopband_edge
    omega = 2.0 * math.pi * j * T

    # |V|^2 is even, so integrate over f >= 0 and double.
    if j == 0:
        flat = 2.0 * T * f1
    else:
        flat = 2.0 * T * math.sin(omega * f1) / omega

    edge = 0.0
    if f2 > f1:
        def power(f):
            return rrc_spectrum_power(f, pulse)

        if j == 0:
            edge, err = integrate.quad(power, f1, f2, epsabs=1e-13, epsrel=1e-12, limit=200)
        else:
            edge, err = integrate.quad(
                power, f1, f2, weight="cos", wvar=omega, epsabs=1e-13, epsrel=1e-12, limit=200
            )
        logger.debug("orthogonality j=%s rho=%s edge=%s (err %s)", j, pulse.rolloff, edge, err)
        edge *= 2.0

    return flat + edge
