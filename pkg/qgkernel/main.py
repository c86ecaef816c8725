# CLI entrypoint: configures logging and registers one command module per verb.
#
#     python -m qgkernel.main haar --group o+:2 --word "1,1;1,1"
from __future__ import annotations

import logging

import click

from .commands.converge import converge_command
from .commands.defect import defect_command
from .commands.haar import haar_command
from .commands.moments import moments_command
from .commands.usplit import usplit_command
from .config import get_settings


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level, logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")
    logging.getLogger().setLevel(level)


@click.group("qgkernel")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging (overrides QGK_LOG_LEVEL).")
def cli(verbose: bool) -> None:
    """Exact Haar states, convolution convergence and amenability diagnostics for compact quantum groups."""
    _configure_logging(verbose)


cli.add_command(haar_command)
cli.add_command(converge_command)
cli.add_command(defect_command)
cli.add_command(usplit_command)
cli.add_command(moments_command)


if __name__ == "__main__":
    cli()
