"""
API for the configuration file.
Exposes read_config, get_config and the Config TypedDict.
"""
import os
import tomllib
from logging import getLogger
from pathlib import Path
from typing import TypedDict

LOGGER = getLogger("config_interpreter")

CONFIG_ENV = "PADIC_DYNAMICS_CONFIG"
GUARD_ENV = "PADIC_DYNAMICS_GUARD"
DEFAULT_PATH = Path(__file__).parent / "config.toml"


class _PrecisionConfig(TypedDict):
    guard_digits: int
    log_guard_factor: int
    default_precT: int


class _SolverConfig(TypedDict):
    contraction_cap_factor: int
    log_max_iterations: int
    log_confirmations: int


class _LoggingConfig(TypedDict):
    stderr_level: int|str
    file_level: int|str
    log_dir: str


class Config(TypedDict):
    """
    Typing for the configuration object.
    """
    Precision: _PrecisionConfig
    Solver: _SolverConfig
    Logging: _LoggingConfig


DEFAULTS: Config = {
    "Precision": {
        "guard_digits": -1,
        "log_guard_factor": 1,
        "default_precT": 16,
    },
    "Solver": {
        "contraction_cap_factor": 2,
        "log_max_iterations": 200,
        "log_confirmations": 2,
    },
    "Logging": {
        "stderr_level": "INFO",
        "file_level": "DEBUG",
        "log_dir": "",
    },
}

_loaded: Config|None = None


def read_config(path: str|Path) -> Config:
    """
    Loads the configuration out of (path) as a dictionary.
    Missing tables or keys fall back to DEFAULTS.
    """
    with open(path, "rb") as config_file:
        # Not using ConfigParser.read for better error detection
        raw = tomllib.load(config_file)
    merged = {}
    for table, values in DEFAULTS.items():
        merged[table] = {**values, **raw.get(table, {})}
    return merged  # type: ignore


def get_config() -> Config:
    """
    Returns the process-wide configuration, reading it on first use from
    $PADIC_DYNAMICS_CONFIG or the config.toml next to this file.
    """
    global _loaded
    if _loaded is None:
        path = Path(os.environ.get(CONFIG_ENV, DEFAULT_PATH))
        if path.exists():
            _loaded = read_config(path)
        else:
            LOGGER.debug("No configuration at %s, using defaults", path)
            _loaded = DEFAULTS
    return _loaded


def guard_override() -> int|None:
    """
    Guard-digit width forced by $PADIC_DYNAMICS_GUARD or the configuration,
    None when module contracts should decide.
    """
    value = os.environ.get(GUARD_ENV)
    if value is not None:
        try:
            guard = int(value)
        except ValueError:
            raise ValueError(f"{GUARD_ENV} must be an integer, got {value!r}") from None
        if guard < 0:
            raise ValueError(f"{GUARD_ENV} must be non-negative, got {guard}")
        return guard
    configured = get_config()["Precision"]["guard_digits"]
    return configured if configured >= 0 else None
