# `usplit`: h_{U_n+} against (h_T * h_{O_n+}) pulled back along u_ij -> z a_ij.
from __future__ import annotations

from typing import Optional

import click

from ..catalog import usplit_check
from ..reporting import report_json
from ..schemas import UsplitConfig
from . import EXIT_UNMET, finish, kernel_command


@click.command("usplit")
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--max-degree", type=int, default=4, show_default=True)
@click.option("--sample", type=int, default=500, show_default=True,
              help="Words drawn when the full word set is too large.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@kernel_command
def usplit_command(n: int, max_degree: int, sample: int, seed: int, out: Optional[str]) -> None:
    """Exit 0 iff the maximum discrepancy is at most 1e-12."""
    config = UsplitConfig(n=n, max_degree=max_degree, sample=sample, seed=seed, out=out)
    report = usplit_check(config.n, config.max_degree, config.sample, config.seed)
    summary = f"passed={report.passed} words={report.words_checked} max_discrepancy={report.max_discrepancy}"
    finish(report_json(report, config), config.out, summary)
    if not report.passed:
        click.get_current_context().exit(EXIT_UNMET)
