"""
Configuration management for the heaviest-cycle bound verifier
Handles environment variables and search/enumeration settings
"""

import os
from functools import lru_cache
from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class ApplicationSettings(BaseSettings):
    """Application configuration with environment variable support"""

    # Application Info
    application_name: str = "cyclebound"
    application_version: str = "1.0.0"
    debug_mode: bool = False

    # Exact solver caps (vertex counts); exceeding one is an error, never an approximation
    enumeration_cap: int = 12
    search_cap: int = 15
    hamilton_max_order: int = 8
    two_opt_max_order: int = 7
    characterization_max_order: int = 7

    # Execution
    max_workers: int = 1  # 1 = sequential
    arithmetic_mode: Literal["exact", "float"] = "exact"
    float_tolerance: float = 1e-9

    # Fuzzing
    fuzz_output_directory: str = "./fuzz_failures"
    fuzz_threshold_samples: int = 3

    # Logging Configuration
    log_level: str = "INFO"
    enable_file_logging: bool = False
    log_file_path: str = "./logs/cyclebound.log"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_prefix="CYCLEBOUND_",  # Reads CYCLEBOUND_SEARCH_CAP etc.
        extra="ignore",
    )

    @field_validator("enumeration_cap", "search_cap")
    @classmethod
    def validate_cap(cls, v: int) -> int:
        """Caps below 3 cannot hold a single cycle"""
        if v < 3:
            raise ValueError("Vertex caps must be at least 3")
        return v

    @field_validator("hamilton_max_order", "two_opt_max_order", "characterization_max_order")
    @classmethod
    def validate_clique_order(cls, v: int) -> int:
        if not 4 <= v <= 10:
            raise ValueError("Clique order limits must lie in [4, 10]")
        return v

    @field_validator("max_workers")
    @classmethod
    def validate_max_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("max_workers must be at least 1")
        return v

    @field_validator("float_tolerance")
    @classmethod
    def validate_float_tolerance(cls, v: float) -> float:
        """Validate tolerance is between 0 and 1"""
        if not 0 < v < 1:
            raise ValueError("Float tolerance must be between 0 and 1 (exclusive)")
        return v


class DevelopmentSettings(ApplicationSettings):
    """Development environment configuration"""
    debug_mode: bool = True
    log_level: str = "DEBUG"


class ProductionSettings(ApplicationSettings):
    """Batch/CI environment configuration"""
    debug_mode: bool = False
    log_level: str = "WARNING"
    enable_file_logging: bool = True


class TestingSettings(ApplicationSettings):
    """Testing environment configuration"""
    debug_mode: bool = True
    log_level: str = "DEBUG"
    fuzz_output_directory: str = "./test_outputs/fuzz_failures"


@lru_cache()
def get_application_settings() -> ApplicationSettings:
    """Get application settings based on environment"""
    environment = os.getenv("ENVIRONMENT", "production").lower()

    if environment == "development":
        return DevelopmentSettings()
    elif environment == "testing":
        return TestingSettings()
    else:
        return ProductionSettings()


# Global settings instance, loaded based on ENVIRONMENT variable
settings = get_application_settings()
