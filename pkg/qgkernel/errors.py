# Exception hierarchy shared by every module.
# Each error carries an exit_code (the CLI maps it to the process status) and a structured detail dict.
from __future__ import annotations

from typing import Any, Optional


class KernelError(Exception):
    """Root of all qgkernel errors."""

    exit_code: int = 1

    def __init__(self, message: str, detail: Optional[dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def __str__(self) -> str:
        if not self.detail:
            return self.message
        extras = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{self.message} ({extras})"


class ArgumentError(KernelError, ValueError):
    """Invalid arguments: size mismatches, bad color patterns, out-of-range indices."""

    exit_code = 2


class WordSyntaxError(ArgumentError):
    """Text does not match the word grammar."""


class GroupNameError(ArgumentError):
    """Unknown group name or invalid family parameters."""


class RelationError(ArgumentError):
    """Generator images (or a morphism) violate the defining relations."""


class UnsupportedError(ArgumentError):
    """Family/method combination that is not implemented."""


class ResourceCapError(KernelError):
    """A configured resource cap would be exceeded."""

    exit_code = 3


def check_cap(name: str, value: int, cap: int) -> None:
    # Shared guard for every configured resource cap
    if value > cap:
        raise ResourceCapError(f"{name} exceeds configured cap", {"value": value, "cap": cap})
