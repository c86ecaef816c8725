# Pytest configuration for the kernel and CLI tests.
# Disables Redis so every run uses the in-process cache only, and puts the repo root on sys.path.
import os
from typing import Iterator

import pytest
from click.testing import CliRunner

# Test-time environment: no shared cache, quiet logging
os.environ["QGK_REDIS_ENABLED"] = "false"
os.environ.setdefault("QGK_LOG_LEVEL", "WARNING")

import sys
# Ensure the repo root is on sys.path so 'qgkernel' resolves when running pytest from anywhere
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from qgkernel.cache import reset_redis  # noqa: E402
from qgkernel.config import get_settings, reset_settings  # noqa: E402


@pytest.fixture(autouse=True)
def _isolated_settings() -> Iterator[None]:
    """Each test starts from settings re-read from the environment and no Redis client."""
    reset_settings()
    reset_redis()
    yield
    reset_settings()
    reset_redis()


@pytest.fixture()
def fresh_settings(monkeypatch: pytest.MonkeyPatch):
    """
    Re-read QGK_* variables after the test sets them:

        def test_x(fresh_settings):
            settings = fresh_settings(QGK_TRANSFER_CAP="10")
    """

    def _load(**env: str):
        for key, value in env.items():
            monkeypatch.setenv(key, value)
        reset_settings()
        return get_settings()

    return _load


@pytest.fixture()
def runner() -> CliRunner:
    """Click test runner for invoking the CLI in-process."""
    return CliRunner()


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: degree-four convergence runs and large sampled nets")
