"""Table and sweep commands: the sps table, distance sweeps and KSE surfaces."""

import logging
from dataclasses import replace

import click
import numpy as np

from rrcqkd.commands.options import (
    CHANNEL_KEYS,
    COUNT,
    NONNEGATIVE,
    OUTPUT_KEYS,
    POSITIVE,
    SEARCH_KEYS,
    TAP_KEYS,
    UNIT,
    bounds_from,
    channel_options,
    output,
    output_options,
    reports_errors,
    require_positive_key,
    resolve_settings,
    search_options,
    tap_config_from,
    tap_options,
)
from rrcqkd.core.keyrate import key_rate, kse
from rrcqkd.core.optimize import kse_surface, optimize_kse, optimize_nbar
from rrcqkd.models import ChannelParams, SearchBounds, SweepConfig, TapConfig

logger = logging.getLogger(__name__)

SPS_TABLE_COLUMNS = ["distance_km", "sps", "rho_opt", "nbar_opt", "kse_opt", "skr_opt", "flags"]
SWEEP_COLUMNS = [
    "excess_noise",
    "distance_km",
    "tau",
    "rolloff",
    "nbar_opt",
    "skr_opt",
    "kse_opt",
    "skr_matched",
    "flags",
]
SURFACE_COLUMNS = ["distance_km", "rho", "nbar", "skr", "kse", "flags"]


def _flags(flags) -> str:
    return ";".join(sorted(flags)) or "none"


def sps_table_records(
    sweep: SweepConfig,
    tap_config: TapConfig,
    bounds: SearchBounds,
    detection: str = "heterodyne",
    workers: int = 1,
) -> list[dict]:
    """Joint (rho, nbar) optimum of KSE for every (distance, sps) pair."""
    records = []
    for distance in sweep.distances_km:
        channel = ChannelParams.from_distance(distance, sweep.excess_noise_list[0], sweep.alpha_db_per_km)
        for sps in sweep.sps_list:
            config = replace(tap_config, samples_per_symbol=sps, total_taps=sweep.total_taps)
            report = optimize_kse(channel, config, bounds, sweep.beta, detection, workers)
            logger.info(
                "L=%s km sps=%s: rho*=%.3f nbar*=%.2f KSE*=%.5f",
                distance,
                sps,
                report.rho_opt,
                report.nbar_opt,
                report.kse_opt,
            )
            records.append({"distance_km": distance, "sps": sps, **report.as_record()})
    return records


def distance_sweep_records(
    sweep: SweepConfig,
    tap_config: TapConfig,
    bounds: SearchBounds,
    detection: str = "heterodyne",
) -> list[dict]:
    """
    Optimal SKR and signal strength against distance for each excess noise.

    Distances without key stay in the output with zero rates. ``skr_matched``
    is the ideal-mode key at the same signal strength.
    """
    records = []
    for noise in sweep.excess_noise_list:
        for distance in sweep.distances_km:
            channel = ChannelParams.from_distance(distance, noise, sweep.alpha_db_per_km)
            if sweep.rolloff == "optimize":
                report = optimize_kse(channel, tap_config, bounds, sweep.beta, detection)
                rho, nbar, skr, flags = report.rho_opt, report.nbar_opt, report.skr_opt, report.flags
            else:
                rho = float(sweep.rolloff)
                best = optimize_nbar(rho, channel, tap_config, bounds, sweep.beta, detection)
                nbar, skr, flags = best.nbar, best.skr, best.flags
            matched = key_rate(nbar, channel.transmissivity, noise, sweep.beta, rho, detection)
            records.append(
                {
                    "excess_noise": noise,
                    "distance_km": distance,
                    "tau": channel.transmissivity,
                    "rolloff": rho,
                    "nbar_opt": nbar,
                    "skr_opt": skr,
                    "kse_opt": kse(skr, rho),
                    "skr_matched": matched.skr,
                    "flags": _flags(flags),
                }
            )
    return records


def kse_surface_records(
    sweep: SweepConfig,
    tap_config: TapConfig,
    nbar_grid,
    rho_grid,
    detection: str = "heterodyne",
) -> list[dict]:
    records = []
    for distance in sweep.distances_km:
        channel = ChannelParams.from_distance(distance, sweep.excess_noise_list[0], sweep.alpha_db_per_km)
        for row in kse_surface(channel, tap_config, nbar_grid, rho_grid, sweep.beta, detection):
            records.append({"distance_km": distance, **row})
    return records


def _sweep_config(settings, distances_key, **overrides) -> SweepConfig:
    fields = {
        "distances_km": tuple(float(d) for d in settings[distances_key]),
        "excess_noise_list": tuple(float(n) for n in settings.get("excess_noise_list", (settings.get("excess_noise", 0.0),))),
        "sps_list": tuple(int(s) for s in settings.get("sps_list", (settings.get("sps", 3),))),
        "total_taps": settings["taps"],
        "alpha_db_per_km": settings["alpha_db_per_km"],
        "beta": settings["beta"],
        "output_format": settings["format"],
        "output_path": settings.get("out"),
    }
    fields.update(overrides)
    return SweepConfig(**fields)


@click.command("sps-table")
@click.option("--distance-km", "distances_km", type=NONNEGATIVE, multiple=True, help="Repeatable.")
@click.option("--sps", "sps_list", type=COUNT, multiple=True, help="Repeatable.")
@click.option("--excess-noise", type=NONNEGATIVE)
@click.option("--workers", type=COUNT, help="Threads for the coarse roll-off scan.")
@click.option("--matched/--mismatched", default=None, help="Bypass the mismatch (c_j = delta_j0).")
@tap_options
@channel_options
@search_options
@output_options
@reports_errors
def cmd_sps_table(**flags):
    """Best roll-off, signal strength and KSE per samples-per-symbol choice."""
    keys = ("distances_km", "sps_list", "excess_noise", "workers", "sps", "matched")
    settings = resolve_settings(keys + TAP_KEYS + CHANNEL_KEYS + SEARCH_KEYS + OUTPUT_KEYS, flags)
    sweep = _sweep_config(settings, "distances_km")
    records = sps_table_records(
        sweep, tap_config_from(settings), bounds_from(settings), settings["detection"], settings["workers"]
    )
    frame = output(
        records,
        SPS_TABLE_COLUMNS,
        settings,
        ("distance_km", "sps"),
        fmt=sweep.output_format,
        out=sweep.output_path,
    )
    require_positive_key(frame)


@click.command("distance-sweep")
@click.option("--distance-km", "sweep_distances_km", type=NONNEGATIVE, multiple=True, help="Repeatable.")
@click.option("--excess-noise", "excess_noise_list", type=NONNEGATIVE, multiple=True, help="Repeatable.")
@click.option("--rolloff", type=str, help="Fixed roll-off, or 'optimize'.")
@click.option("--sps", type=COUNT)
@click.option("--matched/--mismatched", default=None)
@tap_options
@channel_options
@search_options
@output_options
@reports_errors
def cmd_distance_sweep(**flags):
    """Optimal SKR and signal strength against distance."""
    keys = ("sweep_distances_km", "excess_noise_list", "rolloff", "sps", "matched")
    settings = resolve_settings(keys + TAP_KEYS + CHANNEL_KEYS + SEARCH_KEYS + OUTPUT_KEYS, flags)
    rolloff = settings["rolloff"]
    if rolloff != "optimize":
        rolloff = float(rolloff)
    sweep = _sweep_config(settings, "sweep_distances_km", rolloff=rolloff)
    records = distance_sweep_records(
        sweep, tap_config_from(settings), bounds_from(settings), settings["detection"]
    )
    frame = output(
        records,
        SWEEP_COLUMNS,
        settings,
        ("excess_noise", "distance_km"),
        fmt=sweep.output_format,
        out=sweep.output_path,
    )
    require_positive_key(frame)


@click.command("kse-surface")
@click.option("--distance-km", "distances_km", type=NONNEGATIVE, multiple=True, help="Repeatable.")
@click.option("--excess-noise", type=NONNEGATIVE)
@click.option("--sps", type=COUNT)
@click.option("--nbar-points", "surface_nbar_points", type=click.IntRange(min=2))
@click.option("--rho-points", "surface_rho_points", type=click.IntRange(min=2))
@click.option("--surface-nbar-min", type=POSITIVE)
@click.option("--surface-nbar-max", type=POSITIVE)
@click.option("--surface-rho-min", type=UNIT)
@click.option("--surface-rho-max", type=UNIT)
@click.option("--matched/--mismatched", default=None, help="Bypass the mismatch (c_j = delta_j0).")
@tap_options
@channel_options
@output_options
@reports_errors
def cmd_kse_surface(**flags):
    """KSE over the (nbar, rho) plane for each distance."""
    keys = (
        "distances_km",
        "excess_noise",
        "sps",
        "surface_nbar_points",
        "surface_rho_points",
        "surface_nbar_min",
        "surface_nbar_max",
        "surface_rho_min",
        "surface_rho_max",
        "matched",
    )
    settings = resolve_settings(keys + TAP_KEYS + CHANNEL_KEYS + OUTPUT_KEYS, flags)
    if not settings["surface_nbar_min"] < settings["surface_nbar_max"]:
        raise click.UsageError("surface nbar range is empty")
    if not settings["surface_rho_min"] < settings["surface_rho_max"]:
        raise click.UsageError("surface roll-off range is empty")
    sweep = _sweep_config(settings, "distances_km")
    nbar_grid = np.geomspace(
        settings["surface_nbar_min"], settings["surface_nbar_max"], settings["surface_nbar_points"]
    )
    rho_grid = np.linspace(
        settings["surface_rho_min"], settings["surface_rho_max"], settings["surface_rho_points"]
    )
    records = kse_surface_records(sweep, tap_config_from(settings), nbar_grid, rho_grid, settings["detection"])
    frame = output(
        records,
        SURFACE_COLUMNS,
        settings,
        ("distance_km", "rho", "nbar"),
        fmt=sweep.output_format,
        out=sweep.output_path,
    )
    require_positive_key(frame, "skr")
