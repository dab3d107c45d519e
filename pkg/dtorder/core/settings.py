import configparser
import logging
import os
import sys

logger = logging.getLogger(__name__)

APP_NAME = "DTOrder"
ORG_NAME = "DTOrderOrg"

SETTINGS_ENV = "DTORDER_SETTINGS"
ENV_PREFIX = "DTORDER_"
SECTION = "General"


def _get_default_data_dir():
    """Gets the base application data directory reliably."""
    # Prefer the XDG data location, like QStandardPaths' AppDataLocation on Linux
    path = os.environ.get("XDG_DATA_HOME")
    if not path:
        home = os.path.expanduser("~")
        if not home or home == "~":
            print("Warning: Could not find home directory, using current directory.", file=sys.stderr)
            return os.path.join(os.getcwd(), f".{ORG_NAME}", APP_NAME)
        if sys.platform == "win32":
            path = os.environ.get("APPDATA") or os.path.join(home, "AppData", "Roaming")
        elif sys.platform == "darwin":
            path = os.path.join(home, "Library", "Application Support")
        else:
            path = os.path.join(home, ".local", "share")
    return os.path.join(path, ORG_NAME, APP_NAME)


DEFAULT_SETTINGS = {
    "log_level": "WARNING",
    # Exact search
    "same_order_limit": 8,
    "free_order_limit": 6,
    "milp_epsilon": 1e-6,
    "lp_window": 4, # window size when a heuristic is given as plain "lp"
    # Experiment protocol
    "batch_size": 100,
    "capacity_increment": 0.125,
    "capacity_steps": 9,
    "jobs": 1,
    # App Data Paths (calculated relative to data dir)
    "crash_log_file": os.path.join(_get_default_data_dir(), "logs", "dtorder_crash.log"),
}


class SettingsManager:
    def __init__(self, path=None):
        # INI file, human-readable; DTORDER_SETTINGS points somewhere else
        self.path = path or os.environ.get(SETTINGS_ENV) or os.path.join(_get_default_data_dir(), "settings.ini")
        self.parser = configparser.ConfigParser(interpolation=None)
        self.reload()

    def reload(self):
        """Re-read the INI file; a missing file means all defaults."""
        self.parser = configparser.ConfigParser(interpolation=None)
        try:
            read = self.parser.read(self.path, encoding="utf-8")
        except configparser.Error as e:
            logger.warning("Ignoring unreadable settings file %s: %s", self.path, e)
            read = []
        if read:
            logger.debug("Using settings file: %s", self.path)
        if not self.parser.has_section(SECTION):
            self.parser.add_section(SECTION)

    def _ensure_default_dirs(self):
        """Ensure the settings directory exists."""
        base_dir = os.path.dirname(os.path.abspath(self.path))
        if not os.path.isdir(base_dir):
            try:
                os.makedirs(base_dir, exist_ok=True)
                logger.info("Created application data directory: %s", base_dir)
            except OSError as e:
                logger.error("Failed to create application data directory %s: %s", base_dir, e)

    def _raw(self, key):
        env_value = os.environ.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            return env_value
        return self.parser.get(SECTION, key, fallback=None)

    def get(self, key, default_override=None):
        """Get a setting value, handling type conversion and defaults."""
        if key not in DEFAULT_SETTINGS and default_override is None:
            logger.warning("Accessing unknown setting key '%s'", key)
            return None

        default = default_override if default_override is not None else DEFAULT_SETTINGS.get(key)
        value = self._raw(key)
        if value is None:
            return default

        # Type correction/validation; INI values are strings
        if default is not None:
            expected_type = type(default)
            try:
                if expected_type is bool:
                    value = value.strip().lower() in ("1", "true", "yes", "on")
                elif expected_type is int:
                    value = int(value)
                elif expected_type is float:
                    value = float(value)
            except (ValueError, TypeError):
                logger.warning("Could not convert setting '%s' value %r to %s, using default.",
                               key, value, expected_type.__name__)
                value = default

        # Treat empty string from INI as needing default
        if value == "" and default not in (None, ""):
            return default
        return value

    def set(self, key, value):
        """Set a setting value and write the INI file if it changed."""
        new_value = str(value).lower() if isinstance(value, bool) else str(value)
        if self.parser.get(SECTION, key, fallback=None) == new_value:
            return
        self.parser.set(SECTION, key, new_value)
        self._ensure_default_dirs()
        with open(self.path, "w", encoding="utf-8") as f:
            self.parser.write(f)
        logger.debug("Setting '%s' changed to %r", key, new_value)


# Global instance
settings_manager = SettingsManager()
