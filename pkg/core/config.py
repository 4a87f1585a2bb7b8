# --- Training Configuration ---
import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import ConfigError
from utils.utils import resource_path

# --- Constants ---
DEFAULT_CONFIG_PATH = resource_path(os.path.join("data", "default_config.json"))
OUTPUT_DIR_ENV = "RECOVERCAST_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "output"

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 60
    batch_size: int = 24
    learning_rate: float = 1e-3
    window_len: int = 30
    hidden_size: int = 32
    seed: int = 0
    gradient_clip: float = 5.0
    test_len: int = 24
    horizon: int = 20
    full_data: bool = False

    # epochs and horizon may be zero; these must be strictly positive
    _POSITIVE = ("batch_size", "learning_rate", "window_len", "hidden_size", "gradient_clip", "test_len")
    _NON_NEGATIVE = ("epochs", "horizon")

    def validate(self) -> "TrainConfig":
        for name in self._POSITIVE:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}", field=name)
        for name in self._NON_NEGATIVE:
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must not be negative, got {getattr(self, name)}", field=name)
        return self

    def with_overrides(self, **overrides: Any) -> "TrainConfig":
        """Copy with every non-None override applied."""
        known = {f.name for f in fields(self)}
        applied = {k: v for k, v in overrides.items() if k in known and v is not None}
        return replace(self, **applied)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(name: str, value: Any, default: Any) -> Any:
    """Return ``value`` converted to the type of ``default`` or raise ValueError."""
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        raise ValueError("expected true/false")
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError("expected an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError("expected a number")
        return float(value)
    return value


def load_train_config(config_path: Optional[str] = DEFAULT_CONFIG_PATH) -> TrainConfig:
    """Training defaults from JSON; bad entries are skipped, a bad file falls back to built-ins."""
    defaults = TrainConfig()
    if not config_path:
        return defaults
    try:
        config_file = Path(config_path)
        if not config_file.exists():
            logger.info(f"Config file not found at '{config_path}'. Using built-in defaults.")
            return defaults

        with open(config_file, "r", encoding="utf-8") as f:
            raw = json.load(f)
        if not isinstance(raw, dict):
            logger.error(f"Config '{config_path}' is not a JSON object. Using built-in defaults.")
            return defaults

        known = {f.name: getattr(defaults, f.name) for f in fields(defaults)}
        loaded: Dict[str, Any] = {}
        for key, value in raw.items():
            if key not in known:
                logger.warning(f"Skipping unknown config key '{key}' in '{config_path}'.")
                continue
            try:
                loaded[key] = _coerce(key, value, known[key])
                logger.debug(f"Loaded config {key} = {loaded[key]!r}")
            except ValueError as e:
                logger.warning(f"Skipping invalid value for '{key}' in '{config_path}': {e}.")

        config = replace(defaults, **loaded)
        logger.info(f"Loaded {len(loaded)} training defaults from '{config_path}'.")
        return config

    except json.JSONDecodeError as e:
        logger.error(f"Error decoding JSON from '{config_path}': {e}. Using built-in defaults.")
    except OSError as e:
        logger.error(f"Failed to read config '{config_path}': {e}. Using built-in defaults.")
    return defaults


def resolve_output_dir(cli_value: Optional[str]) -> Path:
    """``--output-dir``, else $RECOVERCAST_OUTPUT_DIR, else ./output."""
    if cli_value:
        return Path(cli_value)
    env_value = os.environ.get(OUTPUT_DIR_ENV)
    if env_value:
        return Path(env_value)
    return Path(DEFAULT_OUTPUT_DIR)
