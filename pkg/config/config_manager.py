# config/config_manager.py
import configparser
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

from core.errors import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "MONOHIER"
HARD_MAX_ENUMERATION_N = 12
HARD_MAX_MOMENT_ORDER = 10

DEFAULTS: Dict[str, Dict[str, str]] = {
    "LIMITS": {
        "max_enumeration_n": "12",
        "max_moment_order": "10",
        "clt_max_order": "8",
        "poisson_max_order": "10",
        "max_basis": "1000000",
        "dense_matrix_limit": "512",
    },
    "OUTPUT": {
        "output_dir": "results",
        "float_digits": "17",
        "default_format": "csv",
    },
    "DENSITY": {
        "points": "401",
        "margin": "0.25",
    },
    "VERIFY": {
        "seed": "20240607",
        "profile_count": "200",
        "max_k": "4",
        "word_length": "6",
        "record_timings": "true",
    },
    "SYSTEM": {
        "log_level": "INFO",
    },
}


@dataclass(frozen=True)
class Limits:
    """Caps consumed by the command runner."""
    max_enumeration_n: int
    max_moment_order: int
    clt_max_order: int
    poisson_max_order: int
    max_basis: int
    dense_matrix_limit: int


class ConfigManager:
    """
    Manages configuration for the monotone hierarchy toolkit.
    Loads settings from config/monohier.ini, layers MONOHIER_<SECTION>_<KEY>
    environment overrides on top and provides typed access to the values.
    """

    def __init__(self, config_file: str = None, load_env: bool = True):
        """
        Initialize the configuration manager.

        Args:
            config_file: Path to the configuration file. Defaults to 'config/monohier.ini'
            load_env: Read a .env file from the working directory first
        """
        if config_file is None:
            current_dir = Path(__file__).parent
            config_file = current_dir / "monohier.ini"

        self.config_file = Path(config_file)
        self.load_env = load_env
        self.config = configparser.ConfigParser()

        self._load_config()

    def _load_config(self):
        """Load defaults, then the INI file, then environment overrides."""
        if self.load_env:
            load_dotenv(override=False)
        self.config = configparser.ConfigParser()
        self.config.read_dict(DEFAULTS)
        if self.config_file.exists():
            try:
                self.config.read(self.config_file)
            except configparser.Error as e:
                raise ConfigError(f"cannot parse {self.config_file}: {e}") from e
            logger.debug("configuration loaded from %s", self.config_file)
        else:
            logger.warning("configuration file %s not found, using built-in defaults", self.config_file)
        self._apply_environment()

    def _apply_environment(self):
        for section in self.config.sections():
            for key in self.config[section]:
                name = f"{ENV_PREFIX}_{section}_{key}".upper()
                value = os.getenv(name)
                if value is not None:
                    logger.debug("override %s.%s from %s", section, key, name)
                    self.config.set(section, key, value)
        # short form shared with core.representation
        basis = os.getenv(f"{ENV_PREFIX}_MAX_BASIS")
        if basis is not None:
            self.config.set("LIMITS", "max_basis", basis)

    def get(self, section: str, key: str, default: str = None) -> str:
        """
        Get a configuration value.

        Args:
            section: The section name in the INI file
            key: The key name within the section
            default: Default value if the key doesn't exist

        Returns:
            The configuration value as a string
        """
        try:
            return self.config.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default

    def get_boolean(self, section: str, key: str, default: bool = False) -> bool:
        try:
            return self.config.getboolean(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default
        except ValueError as e:
            raise ConfigError(f"{section}.{key} is not a boolean: {e}") from None

    def get_int(self, section: str, key: str, default: int = 0) -> int:
        try:
            return self.config.getint(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default
        except ValueError:
            raise ConfigError(f"{section}.{key} is not an integer: {self.config.get(section, key)!r}") from None

    def get_float(self, section: str, key: str, default: float = 0.0) -> float:
        try:
            return self.config.getfloat(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default
        except ValueError:
            raise ConfigError(f"{section}.{key} is not a number: {self.config.get(section, key)!r}") from None

    def has_section(self, section: str) -> bool:
        """Check if a section exists in the configuration."""
        return self.config.has_section(section)

    def has_option(self, section: str, key: str) -> bool:
        """Check if a key exists in a section."""
        return self.config.has_option(section, key)

    def get_section(self, section: str) -> dict:
        """
        Get all key-value pairs from a section.

        Args:
            section: The section name

        Returns:
            Dictionary of key-value pairs in the section
        """
        if not self.config.has_section(section):
            return {}
        return dict(self.config.items(section))

    def reload(self):
        """Reload the configuration from the file and the environment."""
        self._load_config()

    def limits(self) -> Limits:
        """The [LIMITS] section, validated against the hard caps."""
        limits = Limits(
            max_enumeration_n=self.get_int("LIMITS", "max_enumeration_n", HARD_MAX_ENUMERATION_N),
            max_moment_order=self.get_int("LIMITS", "max_moment_order", HARD_MAX_MOMENT_ORDER),
            clt_max_order=self.get_int("LIMITS", "clt_max_order", 8),
            poisson_max_order=self.get_int("LIMITS", "poisson_max_order", HARD_MAX_MOMENT_ORDER),
            max_basis=self.get_int("LIMITS", "max_basis", 1_000_000),
            dense_matrix_limit=self.get_int("LIMITS", "dense_matrix_limit", 512),
        )
        if not 1 <= limits.max_enumeration_n <= HARD_MAX_ENUMERATION_N:
            raise ConfigError(
                f"max_enumeration_n must lie in [1, {HARD_MAX_ENUMERATION_N}], got {limits.max_enumeration_n}"
            )
        for name in ("max_moment_order", "clt_max_order", "poisson_max_order"):
            value = getattr(limits, name)
            if not 1 <= value <= HARD_MAX_MOMENT_ORDER:
                raise ConfigError(f"{name} must lie in [1, {HARD_MAX_MOMENT_ORDER}], got {value}")
        if limits.max_basis < 1 or limits.dense_matrix_limit < 0:
            raise ConfigError("max_basis must be positive and dense_matrix_limit non-negative")
        return limits

    def output_dir(self, override: Optional[str] = None) -> Path:
        return Path(override or self.get("OUTPUT", "output_dir", "results"))
