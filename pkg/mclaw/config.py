# mclaw/config.py
"""
Configuration Management using Pydantic Settings.

Process-wide settings come from environment variables (prefix MCLAW_)
and an optional .env file. Run configurations (metric, flux, grid...)
are NOT settings; they live in plain-text config files parsed by
mclaw.services.config_parser.
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # App Info
    app_name: str = "mclaw"
    debug: bool = False  # DEBUG logging when True

    # Worker pool bound for check-all and the c-constant sampler (MCLAW_THREADS)
    threads: int = Field(default=1, ge=1)

    # Output
    output_dir: str = "results"
    csv_digits: int = Field(default=17, ge=1, le=17)

    # Quadrature times used for the envelope integrals
    envelope_time_samples: int = Field(default=33, ge=3)

    # Resolution used by check-all when a scenario does not pin one
    baseline_n: int = Field(default=64, ge=4)

    model_config = SettingsConfigDict(
        env_prefix="MCLAW_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


@lru_cache
def get_settings() -> Settings:
    """
    Get application settings (cached).

    Returns:
        Settings: Process configuration
    """
    return Settings()
