"""Application configuration management."""

from fractions import Fraction
from pathlib import Path
from typing import Any, Dict

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="PAYBACK_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = Field(default="Payback Period Analytics")
    debug: bool = Field(default=False)

    # Analysis configuration file
    config_path: str = Field(default="payback_config.yaml")

    # Logging
    log_level: str = Field(default="INFO")
    structured_logging: bool = Field(default=True)


class AnalysisConfig:
    """Analysis defaults loaded from YAML, with built-in fallbacks."""

    def __init__(self, config_path: str = "payback_config.yaml"):
        self.config_path = Path(config_path)
        self._config: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        try:
            with open(self.config_path, "r") as f:
                self._config = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError):
            # Missing or unreadable file: run on defaults
            self._config = self._get_default_config()
        return self._config

    def get_generator_params(self) -> Dict[str, Any]:
        """Get random project generator parameters."""
        defaults = self._get_default_config()["generator"]
        return {**defaults, **self._config.get("generator", {})}

    def get_axiom_setting(self, key: str) -> Any:
        """Get an axiom harness setting (trials, max_witnesses, lsc_samples)."""
        defaults = self._get_default_config()["axioms"]
        return self._config.get("axioms", {}).get(key, defaults.get(key))

    def get_default_discount_table(self) -> Dict[Fraction, Fraction]:
        """Get the exact discount table used when no discount flag is given."""
        raw = self.get_axiom_setting("default_discount_table")
        return {Fraction(str(t)): Fraction(str(f)) for t, f in raw.items()}

    def get_sign_tolerance(self) -> Fraction:
        """Get the sign tolerance for approximately discounted balances."""
        raw = self._config.get("discount", {}).get("sign_tolerance", "1e-12")
        return Fraction(str(raw))

    def get_exponential_precision(self) -> int:
        """Get the digit precision for exponential factors at non-integer times."""
        return int(self._config.get("discount", {}).get("precision", 30))

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration."""
        return {
            "generator": {
                "max_events": 12,
                "time_range": "10",
                "amount_range": "100",
                "max_denominator": 64,
            },
            "axioms": {
                "trials": 1000,
                "max_witnesses": 5,
                "lsc_samples": 32,
                "default_discount_table": {"0": "1", "1": "1/2", "2": "1/4"},
            },
            "discount": {"precision": 30, "sign_tolerance": "1e-12"},
        }


# Global settings instance
settings = Settings()

# Global analysis config instance
analysis_config = AnalysisConfig(settings.config_path)
