"""
Runtime configuration.

Values come from the environment (optionally a local .env file) and act as
defaults; CLI flags and HTTP request bodies override them per call.
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} environment variable must be an integer, got {raw!r}")


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} environment variable must be a number, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    max_stages: int = 64
    float_epsilon: float = 1e-9
    oracle_margin: float = 1e-7
    oracle_max_iter: int = 500
    workers: int = 1
    log_level: str = "INFO"
    log_file: Optional[str] = None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read the SCHUR_* environment variables once per process."""
    settings = Settings(
        max_stages=_env_int("SCHUR_MAX_STAGES", 64),
        float_epsilon=_env_float("SCHUR_FLOAT_EPSILON", 1e-9),
        oracle_margin=_env_float("SCHUR_ORACLE_MARGIN", 1e-7),
        oracle_max_iter=_env_int("SCHUR_ORACLE_MAX_ITER", 500),
        workers=_env_int("SCHUR_WORKERS", 1),
        log_level=os.getenv("SCHUR_LOG_LEVEL", "INFO").upper(),
        log_file=os.getenv("SCHUR_LOG_FILE") or None,
    )
    if settings.max_stages < 0:
        raise ValueError("SCHUR_MAX_STAGES must be >= 0")
    if settings.workers < 1:
        raise ValueError("SCHUR_WORKERS must be >= 1")
    return settings


def configure_logging(level: Optional[str] = None) -> None:
    """Install the stderr handler (and the optional file handler)."""
    settings = get_settings()
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def progress_disabled(progress: Optional[bool]) -> Optional[bool]:
    """tqdm ``disable`` value: None shows the bar only when stderr is a terminal."""
    return None if progress is None else not progress
