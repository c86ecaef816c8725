# Command modules, one per CLI verb, registered on the group in qgkernel.main.
# Shared here: the error-to-exit-code wrapper and small option parsers.
from __future__ import annotations

import functools
import logging
from typing import Callable, Optional

import click
from pydantic import ValidationError

from ..errors import ArgumentError, KernelError
from ..reporting import emit

logger = logging.getLogger("qgkernel.cli")

# Exit status when an experiment ran but its threshold was not met
EXIT_UNMET = 1


def kernel_command(func: Callable) -> Callable:
    """Map KernelError subclasses and config validation errors to their exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except KernelError as exc:
            logger.debug("command.failed command=%s error=%r", ctx.info_name, exc)
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exc.exit_code)
        except ValidationError as exc:
            click.echo(f"error: invalid configuration: {exc}", err=True)
            ctx.exit(ArgumentError.exit_code)

    return wrapper


def parse_pattern(text: Optional[str]) -> Optional[list[bool]]:
    """Color pattern: one character per slot, '*' or '1' starred, '.' or '0' plain."""
    if text is None:
        return None
    out = []
    for ch in text.strip():
        if ch in "*1":
            out.append(True)
        elif ch in ".0":
            out.append(False)
        else:
            raise ArgumentError("bad color pattern", {"pattern": text})
    return out


def finish(text: str, out: Optional[str], summary: str) -> None:
    """Write the document to --out (echoing a one-line summary) or print it."""
    path = emit(text, out)
    if path is None:
        click.echo(text, nl=False)
    else:
        click.echo(f"{summary} -> {path}")
