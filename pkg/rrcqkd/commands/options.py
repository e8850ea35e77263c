"""Shared CLI plumbing: option sets, settings resolution, error translation."""

import functools
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import click
import pandas as pd

from rrcqkd import emit
from rrcqkd.errors import NoPositiveKeyError, RrcQkdError
from rrcqkd.models import ChannelParams, SearchBounds, TapConfig
from rrcqkd.models.pulse import SAMPLING_MODES

logger = logging.getLogger(__name__)

UNIT = click.FloatRange(0.0, 1.0)
NONNEGATIVE = click.FloatRange(min=0.0)
POSITIVE = click.FloatRange(min=0.0, min_open=True)
COUNT = click.IntRange(min=1)


def config_keys(config_cls) -> set[str]:
    return {
        name.lower()
        for name in dir(config_cls)
        if name.isupper() and name != "LOG_LEVEL"
    }


def load_config_file(path, config_cls) -> dict:
    """Read a flat TOML file whose keys mirror the CLI flags."""
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise click.UsageError(f"cannot read config file {path}: {exc}") from exc

    known = config_keys(config_cls)
    settings = {}
    for key, value in data.items():
        name = key.replace("-", "_").lower()
        if name not in known:
            raise click.UsageError(f"unknown key {key!r} in config file {path}")
        if isinstance(value, list):
            value = tuple(value)
        settings[name] = value
    return settings


def _coerce(name, value, ctx, config_cls, path):
    """Run a config-file value through the option type the flag would use."""
    param = next((p for p in ctx.command.params if p.name == name), None)
    if param is None:
        default = getattr(config_cls, name.upper())
        numeric = isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool)
        if default is not None and not (isinstance(value, type(default)) or numeric):
            raise click.UsageError(f"{name} in {path} must be {type(default).__name__}, got {value!r}")
        return value
    try:
        if param.multiple:
            items = value if isinstance(value, (list, tuple)) else (value,)
            return tuple(param.type.convert(item, param, ctx) for item in items)
        return param.type.convert(value, param, ctx)
    except TypeError as exc:
        raise click.BadParameter(f"{value!r} from {path}", ctx=ctx, param=param) from exc


def resolve_settings(keys, flags: dict) -> dict:
    """
    Materialize every setting a command uses.

    Precedence: the active Config class, then the ``--config`` file, then flags.
    """
    ctx = click.get_current_context()
    config_cls = ctx.find_object(dict)["config"]
    settings = {key: getattr(config_cls, key.upper()) for key in keys}

    config_path = flags.pop("config_path", None)
    if config_path:
        from_file = load_config_file(config_path, config_cls)
        settings.update(
            {
                k: _coerce(k, v, ctx, config_cls, config_path)
                for k, v in from_file.items()
                if k in settings
            }
        )

    for key, value in flags.items():
        if value is None or value == ():
            continue
        settings[key] = value
    logger.debug("Resolved settings: %s", settings)
    return settings


def tap_config_from(settings: dict, sps=None) -> TapConfig:
    return TapConfig(
        samples_per_symbol=sps if sps is not None else settings["sps"],
        total_taps=settings["taps"],
        sampling=settings["sampling"],
        matched=settings.get("matched", False),
        j_max=settings["j_max"],
        tail_tol=settings["tail_tol"],
        quadrature_order=settings["quadrature_order"],
    )


def channel_from(settings: dict) -> ChannelParams:
    if settings.get("tau") is not None:
        return ChannelParams(settings["tau"], settings["excess_noise"])
    return ChannelParams.from_distance(
        settings["distance_km"], settings["excess_noise"], settings["alpha_db_per_km"]
    )


def bounds_from(settings: dict) -> SearchBounds:
    return SearchBounds(
        nbar_range=(settings["nbar_min"], settings["nbar_max"]),
        rho_range=(settings["rho_min"], settings["rho_max"]),
        coarse_grid=settings["coarse_grid"],
        refine_tol=settings["refine_tol"],
    )


def output(records: list[dict], columns: list[str], settings: dict, sort_by=(), fmt=None, out=None):
    """
    Emit records in canonical order with the resolved configuration.

    ``fmt`` and ``out`` default to the settings' format and output path.
    """
    fmt = fmt or settings["format"]
    out = out if out is not None else settings.get("out")
    frame = pd.DataFrame.from_records(records, columns=columns)
    if sort_by:
        frame = frame.sort_values(list(sort_by), kind="mergesort").reset_index(drop=True)
    text = emit.write(frame, settings, fmt, out)
    if not out:
        click.echo(text, nl=False)
    return frame


def require_positive_key(frame: pd.DataFrame, column: str = "skr_opt"):
    if not (frame[column] > 0.0).any():
        raise NoPositiveKeyError()


def reports_errors(func):
    """Turn library failures into click errors carrying the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except RrcQkdError as exc:
            logger.error("%s failed: %s", func.__name__, exc)
            error = click.ClickException(str(exc))
            error.exit_code = exc.exit_code
            raise error from exc
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc

    return wrapper


def _stack(*decorators):
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func

    return apply


tap_options = _stack(
    click.option("--taps", type=COUNT, help="Total number of sample-and-hold taps."),
    click.option(
        "--sampling", type=click.Choice(SAMPLING_MODES), help="Hold value: interval centre, mean or left edge."
    ),
    click.option("--j-max", "j_max", type=COUNT, help="Largest ISI lag computed."),
    click.option("--tail-tol", type=POSITIVE, help="Largest accepted omitted ISI mass."),
    click.option("--quadrature-order", type=COUNT, help="Gauss-Legendre nodes per tap interval."),
)

channel_options = _stack(
    click.option("--alpha-db-per-km", type=NONNEGATIVE, help="Fibre attenuation."),
    click.option("--beta", type=click.FloatRange(0.0, 1.0, min_open=True), help="Reconciliation efficiency."),
    click.option("--detection", type=click.Choice(("heterodyne", "homodyne")), help="Receiver type."),
)

search_options = _stack(
    click.option("--nbar-min", type=POSITIVE),
    click.option("--nbar-max", type=POSITIVE),
    click.option("--rho-min", type=UNIT),
    click.option("--rho-max", type=UNIT),
    click.option("--coarse-grid", type=click.IntRange(min=8)),
    click.option("--refine-tol", type=POSITIVE),
)

output_options = _stack(
    click.option("--format", "format", type=click.Choice(emit.FORMATS), help="Output format."),
    click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write to a file instead of stdout."),
    click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="TOML settings file."),
)

TAP_KEYS = ("taps", "sampling", "j_max", "tail_tol", "quadrature_order")
CHANNEL_KEYS = ("alpha_db_per_km", "beta", "detection")
SEARCH_KEYS = ("nbar_min", "nbar_max", "rho_min", "rho_max", "coarse_grid", "refine_tol")
OUTPUT_KEYS = ("format", "out")
