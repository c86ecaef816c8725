# `haar`: exact Haar value of a word (or a linear combination of words).
from __future__ import annotations

from typing import Optional

import click

from ..catalog import haar_state
from ..groups import parse_group
from ..haar import HaarMethod, haar_oracle
from ..reporting import atomic_write, report_json
from ..schemas import ExactValue, HaarResult
from ..words import parse_word_sum
from . import kernel_command


@click.command("haar")
@click.option("--group", "group_name", required=True, help="Group name, e.g. o+:4, u+:2, s:4, t, free(t,o+:3).")
@click.option("--word", required=True, help="Word such as '1,1;1,2*' or a sum '1,1;1,1 + -1*1,2;1,2'.")
@click.option("--method", type=click.Choice([m.value for m in HaarMethod]), default=None,
              help="Evaluation method; defaults to the group's natural one.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write a JSON HaarResult here.")
@kernel_command
def haar_command(group_name: str, word: str, method: Optional[str], out: Optional[str]) -> None:
    """Print h(w) as an exact rational and as a decimal."""
    group = parse_group(group_name)
    s = parse_word_sum(word, group)
    if group.is_free_product:
        state = haar_state(group)
        value = state.evaluate_sum(s)
        used = "free_product"
    else:
        oracle = haar_oracle(group, HaarMethod(method) if method else None)
        value = sum((c * oracle(w) for w, c in s), start=0)
        used = oracle.method.value
    click.echo(f"{value}\t{float(value)!r}")
    if out:
        result = HaarResult(
            group=group.name,
            word=str(s),
            method=used,
            value=ExactValue.of(value),
            config={"group": group_name, "word": word, "method": method},
        )
        atomic_write(out, report_json(result))
