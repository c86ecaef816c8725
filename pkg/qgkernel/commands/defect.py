# `defect`: trace errors and multiplicativity defects along a factorization net.
from __future__ import annotations

from pathlib import Path
from typing import Optional

import click
import yaml

from ..amenability import factorization_report
from ..catalog import build_net, default_corpus, haar_state, load_words
from ..errors import ArgumentError
from ..reporting import report_json
from ..schemas import NetSpec
from . import EXIT_UNMET, finish, kernel_command


def load_net_spec(value: str, seed: Optional[int]) -> NetSpec:
    """A YAML file path, or a bare preset name with default sizes."""
    path = Path(value)
    if path.is_file():
        try:
            data = yaml.safe_load(path.read_text()) or {}
        except yaml.YAMLError as exc:
            raise ArgumentError("net spec is not valid YAML", {"path": value}) from exc
        if not isinstance(data, dict):
            raise ArgumentError("net spec must be a mapping", {"path": value})
    else:
        data = {"preset": value}
    if seed is not None:
        data["seed"] = seed
    return NetSpec(**data)


@click.command("defect")
@click.option("--net", "net", default="o-sampling", show_default=True,
              help="Preset name (s-full, o-sampling, o-convolved) or a YAML NetSpec file.")
@click.option("--trace", type=click.Choice(["preset", "haar"]), default="preset", show_default=True,
              help="Compare traces with the preset's target state or with the Haar state.")
@click.option("--words", "words_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Words file (one per line, '#' comments); a seeded random corpus otherwise.")
@click.option("--seed", type=int, default=None, help="Overrides the seed of the net spec.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@kernel_command
def defect_command(net: str, trace: str, words_file: Optional[str], seed: Optional[int], out: Optional[str]) -> None:
    """Exit 0 iff the net witnesses amenability at the configured thresholds."""
    spec = load_net_spec(net, seed)
    group, elements, target = build_net(spec)
    if trace == "haar":
        target = haar_state(group)
    words = load_words(words_file, group) if words_file else default_corpus(group, seed=spec.seed)
    report = factorization_report(elements, target, words, spec.trace_error_threshold, spec.defect_threshold)
    config = spec.model_copy(update={"out": out})
    document = report.model_copy(update={"config": {**config.model_dump(mode="json"), "trace": trace,
                                                    "words": words_file}})
    summary = f"witnesses={report.witnesses} trace_errors={report.trace_errors}"
    finish(report_json(document), out, summary)
    if not report.witnesses:
        click.get_current_context().exit(EXIT_UNMET)
