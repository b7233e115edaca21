import logging
from collections.abc import Callable, Generator
from pathlib import Path

import pytest

from hornet.config import CONFIG_ENV_VAR_MAP
from hornet.core.logging import _HANDLER_NAME, _LOGGER_NAMESPACE, _LoggingState
from hornet.core.telemetry import reset_telemetry_for_tests
from tests.corpus_helpers import CORPUS_DIR


@pytest.fixture(autouse=True)
def _common_env_config(monkeypatch: pytest.MonkeyPatch, tmp_path_factory: pytest.TempPathFactory) -> None:
    """Point hornet at a throwaway home directory and drop any HORNET_* overrides."""
    for env_var in CONFIG_ENV_VAR_MAP.values():
        monkeypatch.delenv(env_var, raising=False)
    monkeypatch.delenv("HORNET_HOME", raising=False)

    test_home_dir = tmp_path_factory.mktemp("hornet_home")
    import hornet.config

    monkeypatch.setattr(hornet.config, "resolve_home_dir", lambda: test_home_dir)
    hornet.config.get_config.cache_clear()


@pytest.fixture(autouse=True)
def _reset_global_logging_and_telemetry() -> Generator[None]:
    """Reset logger propagation and telemetry state after each test.

    CLI tests may enable file logging, which turns off propagation of the
    ``hornet`` logger and would hide records from ``caplog`` in later tests.
    """
    yield
    namespace_logger = logging.getLogger(_LOGGER_NAMESPACE)
    for handler in list(namespace_logger.handlers):
        if handler.get_name() != _HANDLER_NAME:
            continue
        namespace_logger.removeHandler(handler)
        handler.close()

    _LoggingState.active_log_file = None
    namespace_logger.setLevel(logging.NOTSET)
    namespace_logger.propagate = True
    reset_telemetry_for_tests()


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def corpus_file(tmp_path: Path) -> Callable[[str], Path]:
    """Copy a corpus file into tmp_path so DOT output lands next to it, not in the repo."""

    def _copy(name: str) -> Path:
        target = tmp_path / name
        target.write_text((CORPUS_DIR / name).read_text(encoding="utf-8"), encoding="utf-8")
        return target

    return _copy
