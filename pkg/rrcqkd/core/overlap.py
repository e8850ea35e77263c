"""Overlaps between the transmitted pulse u(t) and the receiver modes v(t - jT)."""

import logging
import math
from functools import lru_cache

import numpy as np

from rrcqkd.core.rrc_shaping import rrc_amplitude
from rrcqkd.core.tap_approximation import approximate_pulse, gauss_legendre
from rrcqkd.errors import NotConvergedError, TruncationError
from rrcqkd.models import ApproxPulse, OverlapSet, RrcPulse, TapConfig

logger = logging.getLogger(__name__)

BESSEL_TOL = 1e-9
TAIL_LAGS = 4
MAX_ESCALATED_J = 1024


def required_j_max(u: ApproxPulse) -> int:
    """Smallest j_max accepted for a pulse with u's support."""
    return math.ceil(u.grid.support_width / (2.0 * u.grid.symbol_period)) + 4


def _tail_estimate(values: np.ndarray, j_max: int, rolloff: float) -> float:
    # c_j^2 decays like j^-4 for rho > 0 (1/t^2 tails of v) and like j^-2 for
    # the sinc pulse; the peak of the outermost lags stands in for the envelope.
    outer = np.concatenate([values[:TAIL_LAGS], values[-TAIL_LAGS:]])
    peak = float(np.max(outer**2))
    if rolloff > 0.0:
        return 2.0 * peak * j_max / 3.0
    return 2.0 * peak * j_max


def overlap_coefficients(
    u: ApproxPulse,
    v: RrcPulse,
    j_max: int = 64,
    tail_tol: float = 1e-8,
    quadrature_order: int = 16,
) -> OverlapSet:
    """
    Compute c_j = sum_k u_k * integral over tap interval k of v(t - jT) dt.

    Each interval integral uses fixed-order Gauss-Legendre quadrature; u is
    constant on the interval so only v is integrated.

    Raises:
        TruncationError: ``j_max`` does not reach past the pulse support.
        NotConvergedError: the extrapolated tail reaches ``tail_tol``.
    """
    T = v.symbol_period
    if not math.isclose(T, u.grid.symbol_period, rel_tol=1e-12):
        raise ValueError("u and v use different symbol periods")
    if j_max < required_j_max(u):
        raise TruncationError(
            f"truncation covers pulse support incompletely: j_max={j_max} "
            f"< {required_j_max(u)}"
        )

    nodes, weights = gauss_legendre(quadrature_order)
    half = u.grid.sample_spacing / 2.0
    t = u.grid.centers[:, None] + half * nodes[None, :]
    lags = np.arange(-j_max, j_max + 1)

    values = np.empty(lags.size)
    amplitudes = u.amplitudes
    for i, j in enumerate(lags):
        interval_integrals = half * (rrc_amplitude(t - j * T, v) @ weights)
        values[i] = float(np.dot(amplitudes, interval_integrals))

    total = float(np.sum(values**2))
    if total > 1.0 + BESSEL_TOL:
        logger.warning("overlap energy %s exceeds 1; quadrature order too low?", total)

    tail = _tail_estimate(values, j_max, v.rolloff)
    logger.debug(
        "overlap rho=%s taps=%s sps=%s: c0=%s sum=%s tail=%s",
        v.rolloff,
        u.grid.total_taps,
        u.grid.samples_per_symbol,
        values[j_max],
        total,
        tail,
    )
    if tail >= tail_tol:
        raise NotConvergedError(
            f"ISI tail not converged: estimated {tail:.3e} >= {tail_tol:.3e} at j_max={j_max}",
            tail_bound=tail,
        )

    return OverlapSet(
        lags=tuple(int(j) for j in lags),
        values=tuple(float(c) for c in values),
        j_max=j_max,
        tail_bound=tail,
        out_of_band=max(0.0, 1.0 - total),
    )


def matched_energy(overlap: OverlapSet) -> float:
    """|c_0|^2: share of the symbol energy landing in its own mode."""
    return overlap[0] ** 2


def isi_factor(overlap: OverlapSet) -> float:
    """Sum of c_j^2 over j != 0: leakage into neighbouring symbol slots."""
    values = overlap.array
    return float(np.sum(values**2) - values[overlap.j_max] ** 2)


@lru_cache(maxsize=4096)
def converged_overlap(rolloff: float, tap_config: TapConfig, symbol_period: float = 1.0) -> OverlapSet:
    """
    Overlap set for a tap configuration, doubling j_max until the tail
    check passes (up to 1024). Cached, since sweeps revisit roll-offs.
    """
    if tap_config.matched:
        return OverlapSet.matched(tap_config.j_max)

    v = RrcPulse(rolloff, symbol_period)
    u = approximate_pulse(
        v, tap_config.grid(symbol_period), tap_config.sampling, tap_config.quadrature_order
    )
    j_max = max(tap_config.j_max, required_j_max(u))
    while True:
        try:
            return overlap_coefficients(
                u, v, j_max, tap_config.tail_tol, tap_config.quadrature_order
            )
        except NotConvergedError as exc:
            if 2 * j_max > MAX_ESCALATED_J:
                raise
            logger.warning(
                "rho=%s: tail %.3e not converged at j_max=%s, retrying with %s",
                rolloff,
                exc.tail_bound,
                j_max,
                2 * j_max,
            )
            j_max *= 2
