# `moments`: CSV of h(chi^k), k = 0..k_max.
from __future__ import annotations

from typing import Optional

import click

from ..groups import parse_group
from ..haar import char_moment
from ..reporting import csv_text
from ..schemas import ExactValue, MomentRow, MomentsConfig
from . import finish, kernel_command


@click.command("moments")
@click.option("--group", "group_name", required=True)
@click.option("--k-max", type=int, default=8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@kernel_command
def moments_command(group_name: str, k_max: int, out: Optional[str]) -> None:
    """Columns: k, exact value, decimal value."""
    config = MomentsConfig(group=group_name, k_max=k_max, out=out)
    group = parse_group(config.group)
    rows = [MomentRow(k=k, value=ExactValue.of(char_moment(group, k))) for k in range(config.k_max + 1)]
    text = csv_text(("k", "value", "decimal"), ((r.k, str(r.value), r.value.value) for r in rows))
    finish(text, config.out, f"{len(rows)} moments of {group.name}")
