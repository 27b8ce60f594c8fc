import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from loguru import logger
from pydantic import ValidationError as PydanticValidationError

from ..utils.errors import ConfigurationError, EnvironmentVariableError, ValidationError
from ..utils.logging_utils import log_config_loaded
from .models import ConfigModel, RunConfig

CACHE_DIR_ENV = "SUZUKI_CACHE_DIR"


def validate_config_path(config_path: Union[str, Path]) -> Path:
    """
    Validate configuration file path.

    Args:
        config_path: Path to configuration file

    Returns:
        Path: Validated Path object

    Raises:
        ConfigurationError: If path is invalid or file doesn't exist
    """
    path = Path(config_path).resolve()
    if not path.is_file():
        raise ConfigurationError(
            f"Configuration file not found: {config_path}",
            context={"path": str(config_path)}
        )
    return path


def load_yaml_safely(config_path: Path) -> Dict[str, Any]:
    """
    Load YAML configuration file using safe_load.

    An empty file is an empty mapping; every section has defaults.

    Raises:
        ConfigurationError: If YAML parsing fails or the top level is not a mapping
    """
    try:
        with config_path.open('r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(
            f"Failed to parse YAML configuration: {e}",
            context={"path": str(config_path)},
            original_error=e
        )
    except OSError as e:
        raise ConfigurationError(
            f"Failed to read configuration file: {config_path}",
            context={"path": str(config_path)},
            original_error=e
        )
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigurationError(
            "Configuration file must contain a mapping",
            context={"path": str(config_path), "type": type(loaded).__name__}
        )
    return loaded


def load_config(config_path: Optional[Union[str, Path]] = None) -> ConfigModel:
    """
    Load and validate configuration from a YAML file; defaults when no path is given.

    Raises:
        ConfigurationError: If configuration loading fails
        ValidationError: If configuration validation fails
    """
    if config_path is None:
        return ConfigModel()

    logger.info(f"Loading configuration from {config_path}")
    path = validate_config_path(config_path)
    config_dict = load_yaml_safely(path)

    try:
        config = ConfigModel.model_validate(config_dict)
    except PydanticValidationError as e:
        raise ValidationError(
            "Configuration validation failed",
            context={
                "path": str(path),
                "errors": [error["msg"] for error in e.errors()]
            },
            original_error=e
        )
    log_config_loaded(path, sorted(config_dict))
    return config


def resolve_cache_dir(
    flag_value: Optional[Union[str, Path]],
    config: ConfigModel,
    environ: Optional[Mapping[str, str]] = None
) -> Optional[Path]:
    """
    Cache directory precedence: command-line flag, then SUZUKI_CACHE_DIR, then the file.

    Raises:
        EnvironmentVariableError: If SUZUKI_CACHE_DIR is set to an empty string or a non-directory
    """
    if flag_value is not None:
        return Path(flag_value)

    environ = os.environ if environ is None else environ
    if CACHE_DIR_ENV in environ:
        value = environ[CACHE_DIR_ENV].strip()
        if not value:
            raise EnvironmentVariableError(
                f"{CACHE_DIR_ENV} is set but empty",
                context={"variable": CACHE_DIR_ENV}
            )
        path = Path(value)
        if path.exists() and not path.is_dir():
            raise EnvironmentVariableError(
                f"{CACHE_DIR_ENV} does not name a directory",
                context={"variable": CACHE_DIR_ENV, "value": value}
            )
        return path

    return config.compute.cache_dir


def build_run_config(config: ConfigModel, **values: Any) -> RunConfig:
    """
    Validate command-line values layered over the file configuration.

    Raises:
        ValidationError: If the combination is invalid (bad m, matrix bound exceeded, ...)
    """
    try:
        return RunConfig.model_validate({**values, "compute": config.compute})
    except PydanticValidationError as e:
        raise ValidationError(
            "Invalid run configuration",
            context={"errors": [error["msg"] for error in e.errors()]},
            original_error=e
        )
