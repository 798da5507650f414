"""
Environment-driven settings for pottab
"""
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .exceptions import ConfigurationError

DEFAULT_SEED = 20150101
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class Settings:
    seed: int
    threads: int
    bayes_draws: int
    sim_bayes_draws: int
    enumeration_cap: int
    log_level: str


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"Environment variable {name} must be an integer, got {raw!r}",
            "CONFIGURATION_ERROR",
            {"variable": name, "value": raw}
        )
    if value < 0:
        raise ConfigurationError(
            f"Environment variable {name} must be nonnegative, got {value}",
            "CONFIGURATION_ERROR",
            {"variable": name, "value": raw}
        )
    return value


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    """Read settings from the environment, after loading a .env file if present"""
    load_dotenv(dotenv_path)
    return Settings(
        seed=_env_int("POTTAB_SEED", DEFAULT_SEED),
        threads=max(1, _env_int("POTTAB_THREADS", os.cpu_count() or 1)),
        bayes_draws=_env_int("POTTAB_BAYES_DRAWS", 10_000),
        sim_bayes_draws=_env_int("POTTAB_SIM_BAYES_DRAWS", 1_000),
        enumeration_cap=_env_int("POTTAB_ENUMERATION_CAP", 10_000_000),
        log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
    )


def configure_logging(level: str = "INFO") -> None:
    # stderr keeps stdout free for JSON/CSV output
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
