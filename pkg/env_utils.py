# env_utils.py
import logging
import os
from typing import Optional

from dotenv import load_dotenv

# Load .env once, on first import
load_dotenv()

_TRUE = {"1", "true", "yes", "y", "on"}


def get_env_value(key: str) -> str:
    """
    Retrieve an environment variable (stored uppercase in .env).
    Raises KeyError if not found.
    """
    upper_key = key.upper()
    val = os.getenv(upper_key)
    if val is None:
        raise KeyError(f"Environment variable '{upper_key}' not found.")
    return val


def get_env_str(key: str, default: Optional[str] = None) -> Optional[str]:
    try:
        val = get_env_value(key)
    except KeyError:
        return default
    return val if val.strip() else default


def get_env_int(key: str, default: int) -> int:
    val = get_env_str(key)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        # log module depends on this one, so use the stdlib logger directly
        logging.getLogger("slk.config").warning("%s=%r is not an integer; using %d", key.upper(), val, default)
        return default


def get_env_bool(key: str, default: bool = False) -> bool:
    val = get_env_str(key)
    if val is None:
        return default
    return val.strip().lower() in _TRUE
