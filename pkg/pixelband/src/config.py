import logging
import os
import sys
from functools import lru_cache

import structlog
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="PIXELBAND_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"

    # Parallelism (0 = use every available core)
    threads: int = 0
    band_chunk_size: int = 256  # queries handed to one worker at a time

    # Artifacts
    out_dir: str = "out"


@lru_cache
def get_settings() -> Settings:
    return Settings()


def resolve_threads(threads: int | None = None) -> int:
    """Translate a requested worker count into a concrete one."""
    if threads is None:
        threads = get_settings().threads
    if threads <= 0:
        return os.cpu_count() or 1
    return threads


def configure_logging(level: str | None = None) -> None:
    """Configure structlog once for CLI runs."""
    level_name = (level or get_settings().log_level).upper()
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping().get(level_name, logging.INFO)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )
