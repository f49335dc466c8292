from __future__ import annotations

import logging
import os

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

THREADS_ENV = "MALYTICS_THREADS"
LOG_LEVEL_ENV = "MALYTICS_LOG_LEVEL"
_DEFAULT_LOG_LEVEL = "WARNING"


def worker_count() -> int:
    """Worker threads for hashing, prediction and folds (``MALYTICS_THREADS``)."""
    default = os.cpu_count() or 1
    raw = os.getenv(THREADS_ENV, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("%s=%r is not an integer; using %d workers", THREADS_ENV, raw, default)
        return default
    if value < 1:
        logger.warning("%s=%d must be >= 1; using %d workers", THREADS_ENV, value, default)
        return default
    return value


def log_level() -> int:
    name = os.getenv(LOG_LEVEL_ENV, _DEFAULT_LOG_LEVEL).strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        return logging.WARNING
    return level
