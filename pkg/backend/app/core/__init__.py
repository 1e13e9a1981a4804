"""
Core module for the heaviest-cycle bound verifier
Contains configuration, logging, and the error hierarchy
"""

from .config import ApplicationSettings, get_application_settings, settings
from .exceptions import (
    CapExceededError,
    CounterexampleError,
    CycleBoundError,
    GraphFormatError,
    GraphValidationError,
    InvariantViolation,
    PreconditionError,
)
from .logger import LoggerMixin, get_application_logger, setup_logging

__all__ = [
    "ApplicationSettings",
    "get_application_settings",
    "settings",
    "get_application_logger",
    "setup_logging",
    "LoggerMixin",
    "CycleBoundError",
    "GraphFormatError",
    "GraphValidationError",
    "PreconditionError",
    "CapExceededError",
    "InvariantViolation",
    "CounterexampleError",
]
