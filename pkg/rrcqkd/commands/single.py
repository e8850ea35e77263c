import logging

import click
import numpy as np

from rrcqkd.commands.options import (
    CHANNEL_KEYS,
    COUNT,
    NONNEGATIVE,
    OUTPUT_KEYS,
    POSITIVE,
    TAP_KEYS,
    UNIT,
    channel_from,
    channel_options,
    output,
    output_options,
    reports_errors,
    resolve_settings,
    tap_config_from,
    tap_options,
)
from rrcqkd.core.keyrate import effective_skr
from rrcqkd.core.overlap import converged_overlap, isi_factor, matched_energy, overlap_coefficients
from rrcqkd.core.rrc_shaping import rrc_amplitude
from rrcqkd.core.tap_approximation import approximate_pulse
from rrcqkd.models import OverlapSet, RrcPulse

logger = logging.getLogger(__name__)

KEYRATE_COLUMNS = [
    "rolloff",
    "nbar",
    "tau",
    "excess_noise",
    "mutual_info",
    "holevo",
    "raw_skr",
    "skr",
    "kse",
    "matched_energy",
    "isi_factor",
    "transmissivity_eff",
    "excess_noise_eff",
]
OVERLAP_COLUMNS = ["j", "c_j", "c_j_sq", "cumulative", "matched_energy", "isi_factor"]
PROFILE_COLUMNS = ["t", "v", "u"]


@click.command("keyrate")
@click.option("--rolloff", type=UNIT, help="RRC roll-off factor.")
@click.option("--nbar", type=POSITIVE, help="Mean photon number per symbol.")
@click.option("--distance-km", type=NONNEGATIVE, help="Fibre length; sets tau.")
@click.option("--tau", type=click.FloatRange(0.0, 1.0, min_open=True), help="Transmissivity; overrides --distance-km.")
@click.option("--excess-noise", type=NONNEGATIVE, help="Excess noise at the channel output (photons).")
@click.option("--sps", type=COUNT, help="Samples per symbol.")
@click.option("--matched/--mismatched", default=None, help="Bypass the mismatch (c_j = delta_j0).")
@tap_options
@channel_options
@output_options
@reports_errors
def cmd_keyrate(**flags):
    """Effective key rate for one operating point."""
    keys = ("rolloff", "nbar", "distance_km", "tau", "excess_noise", "sps", "matched")
    settings = resolve_settings(keys + TAP_KEYS + CHANNEL_KEYS + OUTPUT_KEYS, flags)
    channel = channel_from(settings)
    if settings["tau"] is not None:
        settings["distance_km"] = None
    settings["tau"] = channel.transmissivity

    overlap = converged_overlap(settings["rolloff"], tap_config_from(settings))
    result = effective_skr(
        settings["nbar"],
        channel,
        overlap,
        settings["beta"],
        settings["rolloff"],
        settings["detection"],
    )
    record = {
        "rolloff": settings["rolloff"],
        "nbar": settings["nbar"],
        "tau": channel.transmissivity,
        "excess_noise": channel.excess_noise,
        **result.as_record(),
    }
    logger.info("keyrate: SKR=%s KSE=%s", result.skr, result.kse)
    output([record], KEYRATE_COLUMNS, settings)


@click.command("overlap")
@click.option("--rolloff", type=UNIT, help="RRC roll-off factor.")
@click.option("--sps", type=COUNT, help="Samples per symbol.")
@click.option("--matched/--mismatched", default=None, help="Report the ideal c_j = delta_j0 set.")
@tap_options
@output_options
@reports_errors
def cmd_overlap(**flags):
    """Overlap coefficients c_j between the tap pulse and the RRC modes."""
    settings = resolve_settings(("rolloff", "sps", "matched") + TAP_KEYS + OUTPUT_KEYS, flags)
    if settings["matched"]:
        overlap = OverlapSet.matched(settings["j_max"])
    else:
        v = RrcPulse(settings["rolloff"])
        config = tap_config_from(settings)
        u = approximate_pulse(v, config.grid(), config.sampling, config.quadrature_order)
        overlap = overlap_coefficients(
            u, v, settings["j_max"], settings["tail_tol"], settings["quadrature_order"]
        )

    energy, leakage = matched_energy(overlap), isi_factor(overlap)
    coefficients = overlap.coefficients
    squares = np.array([c * c for c in coefficients.values()])
    records = [
        {
            "j": j,
            "c_j": c,
            "c_j_sq": sq,
            "cumulative": total,
            "matched_energy": energy,
            "isi_factor": leakage,
        }
        for (j, c), sq, total in zip(coefficients.items(), squares, np.cumsum(squares))
    ]
    settings["tail_bound"] = overlap.tail_bound
    settings["out_of_band"] = overlap.out_of_band
    output(records, OVERLAP_COLUMNS, settings)


@click.command("profile")
@click.option("--rolloff", type=UNIT, help="RRC roll-off factor.")
@click.option("--sps", type=COUNT, help="Samples per symbol.")
@click.option("--points-per-symbol", "profile_points_per_symbol", type=COUNT)
@tap_options
@output_options
@reports_errors
def cmd_profile(**flags):
    """Ideal RRC mode v(t) next to its sample-and-hold approximation u(t)."""
    keys = ("rolloff", "sps", "profile_points_per_symbol") + TAP_KEYS + OUTPUT_KEYS
    settings = resolve_settings(keys, flags)
    v = RrcPulse(settings["rolloff"])
    config = tap_config_from(settings)
    u = approximate_pulse(v, config.grid(), config.sampling, config.quadrature_order)

    half_span = u.grid.support_width / 2.0 + v.symbol_period
    count = int(round(2.0 * half_span * settings["profile_points_per_symbol"])) + 1
    t = np.linspace(-half_span, half_span, count)
    records = [
        {"t": float(ti), "v": float(vi), "u": float(ui)}
        for ti, vi, ui in zip(t, rrc_amplitude(t, v), u(t))
    ]
    output(records, PROFILE_COLUMNS, settings)
