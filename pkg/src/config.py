"""
FrozenTime - Configuration Module

Centralized configuration management using Pydantic Settings.
Every value can be overridden with a FROZEN_TIME_* environment variable
or a .env file in the working directory.
"""

import logging
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="FROZEN_TIME_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # -------------------------------------------------------------------------
    # Application
    # -------------------------------------------------------------------------
    app_name: str = Field(default="FrozenTime", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    schema_version: int = Field(
        default=1,
        description="Version tag written to every JSON document"
    )

    # -------------------------------------------------------------------------
    # Certificate Defaults
    # -------------------------------------------------------------------------
    sigma: float = Field(default=1.2, ge=1.0, description="Signal weight sigma")
    sigma0: float = Field(default=1.44, gt=1.0, description="Degree of stability sigma0")
    rho: float = Field(default=0.9, gt=0.0, lt=1.0, description="Contraction rate rho")
    n_width: int = Field(default=1, ge=1, description="Averaging width N")
    max_gap: int = Field(
        default=200,
        ge=1,
        description="Longest window accepted when proposing a time sequence"
    )

    # -------------------------------------------------------------------------
    # Numerics
    # -------------------------------------------------------------------------
    norm_tolerance: float = Field(
        default=1e-10,
        gt=0.0,
        description="Target width of impulse-response tail bounds"
    )
    max_impulse_lags: int = Field(
        default=20000,
        ge=1,
        description="Hard cap on impulse-response lags before giving up on a tail bound"
    )
    random_search_samples: int = Field(
        default=256,
        ge=1,
        description="Sampled inputs per random-search norm lower bound"
    )
    stability_margin: float = Field(
        default=1e-9,
        ge=0.0,
        description="Margin below 1/sigma0 required to call a frozen loop stabilizing"
    )
    divergence_threshold: float = Field(
        default=1e12,
        gt=0.0,
        description="Relative state size at which a simulation is flagged divergent"
    )

    # -------------------------------------------------------------------------
    # Runs and Output
    # -------------------------------------------------------------------------
    threads: int = Field(
        default=4,
        ge=1,
        description="Maximum number of scenarios processed in parallel"
    )
    out_dir: str = Field(default="./out", description="Default output directory")
    float_digits: int = Field(
        default=17,
        ge=1,
        le=17,
        description="Significant digits in CSV/JSON output"
    )

    # -------------------------------------------------------------------------
    # API Server
    # -------------------------------------------------------------------------
    api_host: str = Field(default="0.0.0.0")
    api_port: int = Field(default=8000)

    # -------------------------------------------------------------------------
    # Logging
    # -------------------------------------------------------------------------
    log_level: str = Field(default="INFO")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # -------------------------------------------------------------------------
    # Computed Properties
    # -------------------------------------------------------------------------
    @property
    def float_format(self) -> str:
        """printf-style float format for CSV output."""
        return f"%.{self.float_digits}g"


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Returns:
        Settings: Application settings
    """
    return Settings()


# Create global settings instance
settings = get_settings()


# -------------------------------------------------------------------------
# Logging Configuration
# -------------------------------------------------------------------------

def setup_logging(level: str = None):
    """Configure application logging."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper()),
        format=settings.log_format
    )

    # Reduce noise from third-party libraries
    logging.getLogger("httpx").setLevel(logging.WARNING)
    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)
