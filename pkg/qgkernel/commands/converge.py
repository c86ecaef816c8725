# `converge`: alternating convolution powers of a quantum-subgroup pair against the Haar transfer matrix.
from __future__ import annotations

from typing import Optional

import click

from ..catalog import PAIRS, experiment_pair, haar_state
from ..config import override_settings
from ..groups import parse_group
from ..reporting import report_json
from ..schemas import ConvergeConfig
from ..states import converge_to_haar
from . import EXIT_UNMET, finish, kernel_command, parse_pattern


@click.command("converge")
@click.option("--group", "group_name", default="o+:4", show_default=True)
@click.option("--pair", type=click.Choice(PAIRS), default="classical+fixlast", show_default=True)
@click.option("--degree", type=int, default=4, show_default=True)
@click.option("--pattern", default=None, help="Color pattern for unitary families, e.g. '.*.*'.")
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--max-iter", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded for reproducibility; the run is exact.")
@click.option("--cap-entries", type=int, default=None, help="Override the transfer-matrix entry cap.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@kernel_command
def converge_command(group_name: str, pair: str, degree: int, pattern: Optional[str], tol: float,
                     max_iter: int, seed: int, cap_entries: Optional[int], out: Optional[str]) -> None:
    """Report |T^k - T_h| for T = T_tau1 T_tau2; exit 0 iff converged within --max-iter."""
    config = ConvergeConfig(group=group_name, pair=pair, degree=degree, pattern=pattern, tol=tol,
                            max_iter=max_iter, seed=seed, out=out, cap_entries=cap_entries)
    group = parse_group(config.group)
    colors = parse_pattern(config.pattern)
    overrides = {"transfer_cap": config.cap_entries} if config.cap_entries else {}
    with override_settings(**overrides):
        tau1, tau2 = experiment_pair(config.pair, group)
        report = converge_to_haar(tau1, tau2, haar_state(group), config.degree, colors,
                                  tol=config.tol, max_iter=config.max_iter)
    summary = f"converged={report.converged} iterations={report.iterations} residual={report.residuals[-1]:.3e}"
    finish(report_json(report, config), config.out, summary)
    if not report.converged:
        click.get_current_context().exit(EXIT_UNMET)
