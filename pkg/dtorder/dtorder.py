#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
import os
import sys
import traceback
from datetime import datetime

from .core.settings import APP_NAME, settings_manager
from .ui import cli

logger = logging.getLogger(APP_NAME)


# --- Global Exception Handling ---
def handle_unhandled_exception(exc_type, exc_value, exc_traceback):
    """Log unhandled exceptions and append them to the crash log."""
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return
    error_msg = "".join(traceback.format_exception(exc_type, exc_value, exc_traceback))
    timestamp = datetime.now().isoformat(timespec="milliseconds")
    full_error_msg = f"--- {timestamp} ---\nUnhandled Exception:\n{error_msg}\n"

    logger.critical("Unhandled exception: %s", exc_value)

    log_file_path = settings_manager.get("crash_log_file")
    try:
        os.makedirs(os.path.dirname(log_file_path), exist_ok=True)
        with open(log_file_path, "a", encoding="utf-8") as f:
            f.write(full_error_msg)
        print(f"Details have been logged to: {log_file_path}", file=sys.stderr)
    except OSError as e:
        print(full_error_msg, file=sys.stderr)
        print(f"Could not write crash log to file '{log_file_path}': {e}", file=sys.stderr)

    sys.exit(1)


# --- Main Application Logic ---
def main():
    level = str(settings_manager.get("log_level")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    sys.excepthook = handle_unhandled_exception
    sys.exit(cli.main())


if __name__ == "__main__":
    main()
