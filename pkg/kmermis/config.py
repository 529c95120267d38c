"""
Configuration management for kmermis.

This module handles loading and managing configuration settings from the
kmermis.config file, with sensible defaults and type validation.
"""

import logging
from pathlib import Path
from typing import Dict, Any

logger = logging.getLogger(__name__)

# Define project directories
PROJECT_ROOT = Path(__file__).parent.parent

GIB = 1024 ** 3

# Default configuration values
# See CONFIG.md for what each setting controls
DEFAULT_CONFIG = {
    'alphabet': 'ACGT',
    'memory_budget': 8 * GIB,  # bytes; estimated tables are checked against this before allocation
    'k_ceiling': 15,  # larger k needs --force-large-k
    'exhaustive_verify_max_k': 10,
    'sampled_maximality': 1000000,  # random k-mers checked when exhaustive verification is off
    'verify_dp_budget': 200000000,  # max DP calls before verification switches strategy
    'brute_oracle_max_k': 8,
    'table_k_ceiling': 12,
    'table_max_workers': 4,
    'verify_max_workers': 4,
    'progress_interval': 10,  # percent of the k-mer space between progress log lines
    'random_seed': 12345,
    'log_file': 'kmermis.log',  # empty string disables the log file
    'log_level': 'INFO',
}


def _coerce(default: Any, value: str) -> Any:
    """Convert a raw config string to the type of its default value."""
    # bool first, since bool is a subclass of int
    if isinstance(default, bool) or value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value


def load_config(config_file: Path = None) -> Dict[str, Any]:
    """Load configuration from the kmermis.config file."""
    config = DEFAULT_CONFIG.copy()
    config_file = config_file or PROJECT_ROOT / "kmermis.config"

    if config_file.exists():
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                for line_num, line in enumerate(f, 1):
                    line = line.strip()
                    if not line or line.startswith('#'):
                        continue

                    if '=' in line:
                        key, value = line.split('=', 1)
                        key = key.strip()
                        value = value.split('#')[0].strip()  # Remove inline comments

                        if key in config:
                            try:
                                config[key] = _coerce(config[key], value)
                            except ValueError:
                                logger.warning(f"Invalid config value at line {line_num}: {line}")
                        else:
                            # Keep keys that aren't in DEFAULT_CONFIG yet
                            config[key] = value

            logger.info(f"Loaded configuration: memory_budget={config['memory_budget']} bytes, "
                        f"alphabet={config['alphabet']}")
        except OSError as e:
            logger.warning(f"Error loading config file: {e}. Using defaults.")
    else:
        logger.debug("No config file found. Using defaults.")

    return config


def get_config() -> Dict[str, Any]:
    """Get the current configuration."""
    return _config


# Load configuration on module import
_config = load_config()

# For backward compatibility
CONFIG = _config
