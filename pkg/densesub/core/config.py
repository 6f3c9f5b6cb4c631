"""
DenseSub - Configuration Management
===================================

Handles the INI configuration file and the environment overrides that sit on
top of it. Precedence: command-line flag > environment > INI file > defaults.
"""

import configparser
import os

from .errors import SpecError
from ..constants import CONFIG_FILE, DEFAULT_CONFIG, THREADS_ENV

SECTION = "Settings"

# Settings that an environment variable may override
ENV_OVERRIDES = {"threads": THREADS_ENV}


class ConfigManager:
    """Manages the DenseSub configuration without touching disk on import."""

    def __init__(self, path=CONFIG_FILE):
        """Initialize configuration manager and load an existing config file."""
        self.path = path
        self.config = configparser.ConfigParser()
        self.load_config()

    def load_config(self):
        """Load configuration from file, falling back to defaults."""
        self.config[SECTION] = DEFAULT_CONFIG.copy()
        if os.path.exists(self.path):
            loaded = configparser.ConfigParser()
            try:
                loaded.read(self.path, encoding="utf-8")
            except configparser.Error:
                return
            if loaded.has_section(SECTION):
                for key, value in loaded[SECTION].items():
                    self.config[SECTION][key] = value

    def ensure_file(self):
        """Write the defaults out when no configuration file exists yet."""
        if not os.path.exists(self.path):
            self.save_config_immediately()

    def get_setting(self, key, default=None):
        """Get a setting; environment overrides win over the file."""
        env_name = ENV_OVERRIDES.get(key)
        if env_name and os.environ.get(env_name):
            return os.environ[env_name]
        fallback = default if default is not None else DEFAULT_CONFIG.get(key, "")
        return self.config[SECTION].get(key, fallback)

    def get_bool_setting(self, key):
        """Get a boolean setting value."""
        return str(self.get_setting(key)).strip().lower() == "true"

    def get_int_setting(self, key):
        """Get an integer setting value; malformed values are a SpecError."""
        value = self.get_setting(key)
        try:
            return int(value)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"setting '{key}' must be an integer, got {value!r}") from exc

    def get_language(self):
        return self.get_setting("language", "en")

    def save_config_immediately(self):
        """Save configuration to file immediately."""
        try:
            with open(self.path, "w", encoding="utf-8") as f:
                self.config.write(f)
        except OSError:
            pass  # Silent fail for config save

    def update_config(self, settings_dict):
        """Merge new settings into the section and save."""
        for key, value in settings_dict.items():
            self.config[SECTION][key] = str(value)
        self.save_config_immediately()

    def reset_to_defaults(self):
        """Reset all settings to default values."""
        self.config[SECTION] = DEFAULT_CONFIG.copy()
        self.save_config_immediately()


# Global configuration manager instance
config_manager = ConfigManager()
