import logging

import click

from config import get_config

logger = logging.getLogger(__name__)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.option("--env", "environment", help="Config class to use (development, testing, production).")
@click.pass_context
def cli(ctx, verbose, environment):
    """Tx-Rx mode mismatch in Gaussian-modulated CV QKD with tap-limited RRC pulses."""
    config = get_config(environment)
    ctx.ensure_object(dict)["config"] = config
    logging.getLogger().setLevel("DEBUG" if verbose else config.LOG_LEVEL)
    logger.debug("Using %s", config.__name__)


from rrcqkd.commands import (  # noqa: E402
    cmd_distance_sweep,
    cmd_keyrate,
    cmd_kse_surface,
    cmd_overlap,
    cmd_profile,
    cmd_sps_table,
)

for command in (cmd_keyrate, cmd_overlap, cmd_profile, cmd_sps_table, cmd_distance_sweep, cmd_kse_surface):
    cli.add_command(command)
