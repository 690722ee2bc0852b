# helpers/config_helpers.py

import logging
import os

ENV_DEFAULTS = {
    "DELSARTE_WORKERS": "1",
    "DELSARTE_ORACLE_CAP": "4096",
    "DELSARTE_EIGEN_CAP": "256",
    "DELSARTE_CLIQUE_TIME_BUDGET": "60",
    "DELSARTE_LOG_LEVEL": "WARNING",
}

# Zero is allowed where it switches the feature off.
_NONNEGATIVE = {"DELSARTE_CLIQUE_TIME_BUDGET"}
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _invalid_reason(name, value):
    if name == "DELSARTE_LOG_LEVEL":
        return None if value.upper() in _LOG_LEVELS else f"expected one of {', '.join(_LOG_LEVELS)}"
    try:
        number = int(value)
    except ValueError:
        return "expected an integer"
    floor = 0 if name in _NONNEGATIVE else 1
    return None if number >= floor else f"expected an integer >= {floor}"


def check_env_vars():
    """
    Check that every DELSARTE_* variable that is set parses.
    Unset variables fall back to their defaults.
    """
    invalid = []
    for name in ENV_DEFAULTS:
        value = os.getenv(name)
        if value is None:
            continue
        reason = _invalid_reason(name, value)
        if reason:
            invalid.append(name)
            logging.error(f"Invalid value {value!r} for {name}: {reason}")
    if invalid:
        print(f"Invalid environment variables: {', '.join(invalid)}. Please fix the env vars file.")
        return False
    return True


def get_setting(name: str) -> str:
    return os.getenv(name, ENV_DEFAULTS[name])


def get_int_setting(name: str) -> int:
    return int(get_setting(name))


def get_workers() -> int:
    return get_int_setting("DELSARTE_WORKERS")


def get_oracle_cap() -> int:
    return get_int_setting("DELSARTE_ORACLE_CAP")


def get_eigen_cap() -> int:
    return get_int_setting("DELSARTE_EIGEN_CAP")


def get_clique_time_budget():
    """Seconds, or None when the budget is disabled with 0."""
    seconds = get_int_setting("DELSARTE_CLIQUE_TIME_BUDGET")
    return seconds or None


def setup_logging(verbose: bool = False, debug: bool = False):
    if debug:
        level = logging.DEBUG
    elif verbose:
        level = logging.INFO
    else:
        level = getattr(logging, get_setting("DELSARTE_LOG_LEVEL").upper())
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s", force=True)
    logging.debug(f"Logging configured at {logging.getLevelName(level)}")
