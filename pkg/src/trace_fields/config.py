"""
Configuration settings for Trace Fields.

Uses Pydantic Settings for environment-based configuration. Numerical
tolerances are carried by the immutable ``Tolerances`` model and threaded
explicitly through every fallible operation.
"""

import logging
import os
import sys

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application settings
    DEBUG: bool = Field(default=False, description="Enable debug mode")
    ALLOWED_ORIGINS: list[str] = Field(
        default=["*"],
        description="CORS allowed origins",
    )

    # Numerical tolerances
    EPS_FORM: float = Field(
        default=1e-10,
        description="Form / membership residual bound for SU(2,1) validation",
    )
    EPS_CLASS: float = Field(
        default=1e-8,
        description="Classification margin (eigenvalue moduli, fixed point distances)",
    )
    EPS_FIELD: float = Field(
        default=1e-8,
        description="Reality and field membership threshold for traces",
    )
    EPS_SOLVE: float = Field(
        default=1e-12,
        description="Conditioning floor for linear solves",
    )
    EPS_CERT: float = Field(
        default=1e-7,
        description="Largest certificate residual accepted before IllConditioned",
    )

    # Search settings
    MAX_WORD_LENGTH: int = Field(
        default=6,
        description="Default maximal word length for trace sampling and searches",
    )
    BOOST_MAX_POWER: int = Field(
        default=2**20,
        description="Cap on n when boosting parabolic powers B^n C",
    )
    RANDOM_SEED: int = Field(default=0, description="Default seed for randomized operations")

    LOG_LEVEL: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )
    LOG_FILE: str = Field(
        default="",
        description="Optional log file path; logs go to stderr only when empty",
    )

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()


class Tolerances(BaseModel):
    """Numerical thresholds shared by every pipeline."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_form: float = Field(default=1e-10, gt=0)
    eps_class: float = Field(default=1e-8, gt=0)
    eps_field: float = Field(default=1e-8, gt=0)
    eps_solve: float = Field(default=1e-12, gt=0)
    eps_cert: float = Field(default=1e-7, gt=0)

    @model_validator(mode="after")
    def _check_ordering(self) -> "Tolerances":
        if not self.eps_solve <= self.eps_form <= self.eps_class:
            raise ValueError(
                "tolerances must satisfy eps_solve <= eps_form <= eps_class, got "
                f"{self.eps_solve} / {self.eps_form} / {self.eps_class}"
            )
        return self

    @classmethod
    def from_settings(cls, source: Settings | None = None) -> "Tolerances":
        """Build the default tolerances from application settings."""
        source = source or settings
        return cls(
            eps_form=source.EPS_FORM,
            eps_class=source.EPS_CLASS,
            eps_field=source.EPS_FIELD,
            eps_solve=source.EPS_SOLVE,
            eps_cert=source.EPS_CERT,
        )

    def with_overrides(self, **overrides: float | None) -> "Tolerances":
        """Return a copy with every non-None override applied (and re-validated)."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Tolerances(**values)


def default_tolerances() -> Tolerances:
    return Tolerances.from_settings()


def configure_logging(stream: bool = True) -> None:
    """Configures logging for the application.

    Log records go to stderr so that CLI reports written to stdout stay
    machine readable. A file handler is added when ``LOG_FILE`` is set.
    """
    log_level = os.environ.get("LOG_LEVEL", settings.LOG_LEVEL).upper()
    numeric_log_level = getattr(logging, log_level, logging.INFO)

    handlers: list[logging.Handler] = []
    if stream:
        handlers.append(logging.StreamHandler(sys.stderr))
    log_file = os.environ.get("LOG_FILE", settings.LOG_FILE)
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    # Configure root logger
    logging.basicConfig(
        level=numeric_log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers or [logging.NullHandler()],
        force=True,
    )

    logging.getLogger("uvicorn").setLevel(numeric_log_level)
    logging.getLogger("uvicorn.access").setLevel(numeric_log_level)
    logging.getLogger("httpx").setLevel(logging.WARNING)
    logging.getLogger("httpcore").setLevel(logging.WARNING)

    logging.info(f"Logging configured with level: {log_level}")
