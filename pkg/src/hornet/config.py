"""Configuration management for hornet using YAML and Pydantic."""

import os
import sys
from functools import lru_cache
from pathlib import Path
from typing import Literal, override

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from hornet.core.errors import ConfigurationError

DEFAULT_MAX_CLAUSES = 50_000
DEFAULT_MAX_TERM_DEPTH = 100
DEFAULT_DERIVATION_DEPTH = 200
DEFAULT_FEATURE_TOP_K = 16

type DerivationFormat = Literal["text", "dot", "none"]


class SaturationConfig(BaseModel):
    """Resolution loop guards and indexing switches."""

    max_clauses: int = Field(default=DEFAULT_MAX_CLAUSES, gt=0)
    max_term_depth: int = Field(default=DEFAULT_MAX_TERM_DEPTH, gt=0)
    use_index: bool = True
    feature_top_k: int = Field(default=DEFAULT_FEATURE_TOP_K, ge=0)


class QueryConfig(BaseModel):
    depth_limit: int = Field(default=DEFAULT_DERIVATION_DEPTH, gt=0)


class OutputConfig(BaseModel):
    derivation_format: DerivationFormat = "text"
    stats: bool = False


class LoggingConfig(BaseModel):
    """Application logging configuration."""

    enabled: bool = False
    level: Literal["debug", "info", "warning", "error", "critical"] = "info"
    max_bytes: int = Field(default=10 * 1024 * 1024, ge=0)
    backup_count: int = Field(default=5, ge=0)

    @field_validator("level", mode="before")
    @classmethod
    def normalize_level(cls, value: object) -> object:
        """Accept case-insensitive logging levels from YAML or environment variables."""
        if isinstance(value, str):
            return value.lower()
        return value


class TelemetryConfig(BaseModel):
    """OpenTelemetry configuration for tracing and log export."""

    enabled: bool = False
    service_name: str = "hornet"
    trace_endpoint: str | None = None
    export_logs: bool = False
    logs_endpoint: str | None = None


class Config(BaseSettings):
    """Main configuration container."""

    model_config = SettingsConfigDict(
        env_prefix="HORNET_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    saturation: SaturationConfig = Field(default_factory=SaturationConfig)
    query: QueryConfig = Field(default_factory=QueryConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    telemetry: TelemetryConfig = Field(default_factory=TelemetryConfig)
    debug: bool = False

    @classmethod
    @override
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Env vars take priority over init kwargs (YAML data).

        CLI flags are layered on afterwards by `RunConfig`, not through here.
        """
        return env_settings, init_settings, dotenv_settings, file_secret_settings

    @property
    def hornet_dir(self) -> Path:
        return resolve_home_dir()

    @property
    def logs_dir(self) -> Path:
        """Get the local application logs directory path."""
        return self.hornet_dir / "logs"


def resolve_home_dir() -> Path:
    """
    Resolve the hornet state directory with priority:
    1. HORNET_HOME environment variable
    2. ~/.hornet

    Returns:
        Path: Resolved directory path
    """
    if hornet_home := os.getenv("HORNET_HOME"):
        return Path(hornet_home)
    return Path.home() / ".hornet"


def get_default_config_path() -> Path:
    """Return the default hornet config file path."""
    return resolve_home_dir() / "config.yaml"


def _read_yaml(config_path: Path) -> dict[str, object]:
    try:
        with config_path.open() as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"Config file {config_path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {config_path} must contain a mapping at the top level")
    return data


def _load_and_validate(data: dict[str, object], validate: bool, print_warnings: bool) -> Config:
    """Build Config and optionally validate with warnings."""
    try:
        cfg = Config(**data)  # type: ignore[arg-type] # ty: ignore[invalid-argument-type]
    except ValidationError as exc:
        raise ConfigurationError(f"Configuration is invalid: {exc}") from exc

    if validate:
        config_warnings = validate_config(cfg)
        if print_warnings and config_warnings:
            for warning in config_warnings:
                print(f"[CONFIG WARNING] {warning}", file=sys.stderr)  # noqa: T201

    return cfg


@lru_cache(maxsize=1)
def get_config(validate: bool = True, print_warnings: bool = True) -> Config:
    """Load configuration from `$HORNET_HOME/config.yaml` with env var overrides.

    A missing file yields the defaults; nothing is written to disk.
    """
    config_path = get_default_config_path()
    data = _read_yaml(config_path) if config_path.is_file() else {}
    return _load_and_validate(data, validate, print_warnings)


def load_config_from_path(config_path: Path, validate: bool = True, print_warnings: bool = True) -> Config:
    """Load configuration from an explicit YAML file path.

    Raises:
        FileNotFoundError: If the config file doesn't exist or is a directory.
        ConfigurationError: If the file is not a YAML mapping.
    """
    resolved_path = config_path.expanduser()
    if not resolved_path.exists():
        raise FileNotFoundError(f"Config file not found at {resolved_path}")
    if not resolved_path.is_file():
        raise FileNotFoundError(f"Config path is not a file: {resolved_path}")

    return _load_and_validate(_read_yaml(resolved_path), validate, print_warnings)


def validate_config(cfg: Config) -> list[str]:
    """Return warnings about settings that are legal but likely to surprise."""
    warnings: list[str] = []

    if cfg.saturation.max_clauses < 100:
        warnings.append(
            f"saturation.max_clauses={cfg.saturation.max_clauses} is very small; most protocols will be inconclusive."
        )
    if cfg.saturation.max_term_depth < 4:
        warnings.append(f"saturation.max_term_depth={cfg.saturation.max_term_depth} cuts off ordinary messages.")
    if cfg.query.depth_limit < 5:
        warnings.append(f"query.depth_limit={cfg.query.depth_limit} will leave most derivable queries inconclusive.")
    if cfg.saturation.feature_top_k == 0 and cfg.saturation.use_index:
        warnings.append("saturation.feature_top_k=0 keeps only the overflow symbol bucket; subsumption filtering weakens.")
    if cfg.telemetry.export_logs and not cfg.telemetry.enabled:
        warnings.append("telemetry.export_logs has no effect while telemetry.enabled is false.")

    return warnings


# Mapping of config paths to their corresponding environment variable names
CONFIG_ENV_VAR_MAP: dict[str, str] = {
    "debug": "HORNET_DEBUG",
    # Saturation
    "saturation.max_clauses": "HORNET_SATURATION__MAX_CLAUSES",
    "saturation.max_term_depth": "HORNET_SATURATION__MAX_TERM_DEPTH",
    "saturation.use_index": "HORNET_SATURATION__USE_INDEX",
    "saturation.feature_top_k": "HORNET_SATURATION__FEATURE_TOP_K",
    # Query
    "query.depth_limit": "HORNET_QUERY__DEPTH_LIMIT",
    # Output
    "output.derivation_format": "HORNET_OUTPUT__DERIVATION_FORMAT",
    "output.stats": "HORNET_OUTPUT__STATS",
    # Logging
    "logging.enabled": "HORNET_LOGGING__ENABLED",
    "logging.level": "HORNET_LOGGING__LEVEL",
    "logging.max_bytes": "HORNET_LOGGING__MAX_BYTES",
    "logging.backup_count": "HORNET_LOGGING__BACKUP_COUNT",
    # Telemetry
    "telemetry.enabled": "HORNET_TELEMETRY__ENABLED",
    "telemetry.service_name": "HORNET_TELEMETRY__SERVICE_NAME",
    "telemetry.trace_endpoint": "HORNET_TELEMETRY__TRACE_ENDPOINT",
    "telemetry.export_logs": "HORNET_TELEMETRY__EXPORT_LOGS",
    "telemetry.logs_endpoint": "HORNET_TELEMETRY__LOGS_ENDPOINT",
}


def get_env_overrides() -> dict[str, str]:
    """Return config paths that are overridden by environment variables, mapped to their env var names."""
    return {
        config_path: env_var for config_path, env_var in CONFIG_ENV_VAR_MAP.items() if os.getenv(env_var) is not None
    }
