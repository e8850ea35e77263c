"""
Signal-strength and roll-off optimization.

Both searches are a coarse grid scan followed by golden-section refinement
around the best grid point; the key-rate surfaces are smooth with a single
peak, so no global optimizer is used.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from rrcqkd.core.keyrate import effective_skr, kse
from rrcqkd.core.overlap import converged_overlap
from rrcqkd.errors import NotConvergedError
from rrcqkd.models import ChannelParams, NbarOptimum, OptimumReport, OverlapSet, SearchBounds, TapConfig
from rrcqkd.models.search import BOUNDARY_OPTIMUM, NEAR_DEGENERATE, NO_POSITIVE_KEY, NOT_CONVERGED

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
DEGENERACY_MARGIN = 0.01


def golden_section_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """
    Maximize a unimodal ``f`` on [a, b] until the bracket is narrower than ``tol``.

    Returns:
        (x, f(x)) at the best interior point.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _flags_for(values: np.ndarray, best: int) -> set[str]:
    flags = set()
    if best in (0, values.size - 1):
        flags.add(BOUNDARY_OPTIMUM)
    peak = values[best]
    for k in range(1, values.size - 1):
        if k == best:
            continue
        is_local_peak = values[k] >= values[k - 1] and values[k] > values[k + 1]
        if is_local_peak and values[k] >= (1.0 - DEGENERACY_MARGIN) * peak:
            flags.add(NEAR_DEGENERATE)
    return flags


def grid_then_golden(f, xs: np.ndarray, tol: float) -> tuple[float, float, set[str], np.ndarray]:
    """
    Scan ``f`` on the ascending grid ``xs`` and refine the best point.

    Ties on the grid go to the smaller x. A best point on either end of the
    grid is returned as-is and flagged as a boundary optimum.

    Returns:
        (x_best, f_best, flags, grid values)
    """
    values = np.array([f(x) for x in xs])
    best = int(np.argmax(values))
    flags = _flags_for(values, best)
    x_best, f_best = float(xs[best]), float(values[best])
    if BOUNDARY_OPTIMUM not in flags:
        x_ref, f_ref = golden_section_max(f, xs[best - 1], xs[best + 1], tol)
        if f_ref > f_best:
            x_best, f_best = float(x_ref), float(f_ref)
    return x_best, f_best, flags, values


def maximize_log_scalar(objective, lo: float, hi: float, coarse_grid: int = 40, refine_tol: float = 1e-4):
    """
    Maximize ``objective(x)`` over x in [lo, hi], searching in log x.

    ``refine_tol`` is the relative resolution in x.
    """
    log_xs = np.linspace(math.log(lo), math.log(hi), coarse_grid)

    def in_log(y):
        return objective(math.exp(y))

    y_best, f_best, flags, values = grid_then_golden(in_log, log_xs, math.log1p(refine_tol))
    return math.exp(y_best), f_best, flags, values


def optimize_nbar(
    rho: float,
    channel: ChannelParams,
    tap_config: TapConfig,
    bounds: SearchBounds = SearchBounds(),
    beta: float = 1.0,
    detection: str = "heterodyne",
    overlap: OverlapSet | None = None,
) -> NbarOptimum:
    """Best mean photon number and its SKR at a fixed roll-off."""
    if overlap is None:
        overlap = converged_overlap(rho, tap_config)

    def skr_at(nbar):
        return effective_skr(nbar, channel, overlap, beta, rho, detection).skr

    lo, hi = bounds.nbar_range
    nbar, skr, flags, values = maximize_log_scalar(skr_at, lo, hi, bounds.coarse_grid, bounds.refine_tol)
    if not np.any(values > 0.0):
        logger.debug("rho=%s tau=%s: no positive key on the grid", rho, channel.transmissivity)
        return NbarOptimum(nbar=lo, skr=0.0, breakdown=None, flags=frozenset({NO_POSITIVE_KEY}))

    if flags:
        logger.debug("rho=%s tau=%s: nbar optimum flagged %s", rho, channel.transmissivity, sorted(flags))
    breakdown = effective_skr(nbar, channel, overlap, beta, rho, detection)
    return NbarOptimum(nbar=nbar, skr=skr, breakdown=breakdown, flags=frozenset(flags))


def _kse_or_skip(opt: NbarOptimum, rho: float) -> float:
    # roll-offs whose overlap set never converged take no part in the argmax
    if NOT_CONVERGED in opt.flags:
        return -math.inf
    return kse(opt.skr, rho)


def optimize_kse(
    channel: ChannelParams,
    tap_config: TapConfig,
    bounds: SearchBounds = SearchBounds(),
    beta: float = 1.0,
    detection: str = "heterodyne",
    workers: int = 1,
) -> OptimumReport:
    """
    Joint maximum of KSE over (nbar, rho); ties go to the smaller roll-off.

    A roll-off whose overlap set fails the tail check even after j_max
    escalation is skipped and the report carries a "not converged" flag.

    Raises:
        NotConvergedError: no roll-off on the coarse grid converged.
    """

    def best_nbar(rho):
        try:
            return optimize_nbar(rho, channel, tap_config, bounds, beta, detection)
        except NotConvergedError as exc:
            logger.warning("rho=%s skipped: %s", rho, exc)
            return NbarOptimum(
                nbar=bounds.nbar_range[0], skr=0.0, breakdown=None, flags=frozenset({NOT_CONVERGED})
            )

    rhos = np.linspace(*bounds.rho_range, bounds.coarse_grid)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            coarse = list(pool.map(best_nbar, rhos))
    else:
        coarse = [best_nbar(rho) for rho in rhos]

    skipped = [float(rho) for rho, opt in zip(rhos, coarse) if NOT_CONVERGED in opt.flags]
    if len(skipped) == len(coarse):
        raise NotConvergedError(f"ISI tail not converged for any roll-off in {bounds.rho_range}")

    grid = tuple(
        {"rho": float(rho), "nbar_opt": opt.nbar, "skr_opt": opt.skr, "kse_opt": kse(opt.skr, rho)}
        for rho, opt in zip(rhos, coarse)
    )
    kses = np.array([_kse_or_skip(opt, rho) for rho, opt in zip(rhos, coarse)])
    extra = {NOT_CONVERGED} if skipped else set()
    if not np.any(kses > 0.0):
        logger.info("tau=%s: no positive key for any roll-off", channel.transmissivity)
        lo = bounds.nbar_range[0]
        return OptimumReport(float(rhos[0]), lo, 0.0, 0.0, grid, frozenset({NO_POSITIVE_KEY} | extra))

    cache = dict(zip((float(r) for r in rhos), coarse))

    def kse_at(rho):
        opt = cache.get(rho)
        if opt is None:
            opt = cache[rho] = best_nbar(rho)
        return _kse_or_skip(opt, rho)

    best = int(np.argmax(kses))
    flags = _flags_for(kses, best) | extra
    rho_opt, kse_opt = float(rhos[best]), float(kses[best])
    if BOUNDARY_OPTIMUM not in flags:
        rho_ref, kse_ref = golden_section_max(kse_at, rhos[best - 1], rhos[best + 1], bounds.refine_tol)
        if kse_ref > kse_opt:
            rho_opt, kse_opt = float(rho_ref), float(kse_ref)

    chosen = cache[rho_opt]
    if BOUNDARY_OPTIMUM in chosen.flags:
        flags.add("nbar " + BOUNDARY_OPTIMUM)
    if flags:
        logger.warning("KSE optimum at tau=%s flagged: %s", channel.transmissivity, sorted(flags))
    logger.info(
        "tau=%s: rho*=%.4f nbar*=%.3f KSE*=%.6g", channel.transmissivity, rho_opt, chosen.nbar, kse_opt
    )
    return OptimumReport(
        rho_opt=rho_opt,
        nbar_opt=chosen.nbar,
        skr_opt=chosen.skr,
        kse_opt=kse_opt,
        grid=grid,
        flags=frozenset(flags),
    )


def kse_surface(
    channel: ChannelParams,
    tap_config: TapConfig,
    nbar_grid,
    rho_grid,
    beta: float = 1.0,
    detection: str = "heterodyne",
) -> list[dict]:
    """
    KSE on the full (rho, nbar) grid.

    Rows of a roll-off whose overlap set does not converge hold NaN rates
    and the "not converged" flag.
    """
    records = []
    failed = 0
    for rho in rho_grid:
        try:
            overlap = converged_overlap(float(rho), tap_config)
        except NotConvergedError as exc:
            logger.warning("rho=%s left out of the surface: %s", rho, exc)
            failed += 1
            records.extend(
                {
                    "rho": float(rho),
                    "nbar": float(n),
                    "skr": math.nan,
                    "kse": math.nan,
                    "flags": NOT_CONVERGED,
                }
                for n in nbar_grid
            )
            continue
        for nbar in nbar_grid:
            result = effective_skr(float(nbar), channel, overlap, beta, float(rho), detection)
            records.append(
                {
                    "rho": float(rho),
                    "nbar": float(nbar),
                    "skr": result.skr,
                    "kse": result.kse,
                    "flags": "none",
                }
            )
    if failed == len(rho_grid):
        raise NotConvergedError("ISI tail not converged for any roll-off on the surface grid")
    return records
