"""Exception types and computation caps shared across the package."""
import os

DEFAULT_ENUMERATION_CAP = 12
DEFAULT_GENERAL_CAP = 10
DEFAULT_ORACLE_CAP = 7
CAP_ENV_VAR = "ATOMPART_CAP_N"


class AtompartError(Exception):
    """Base class for all package errors."""


class InvalidArgument(AtompartError, ValueError):
    pass


class InvalidModel(AtompartError, ValueError):
    pass


class InvalidState(AtompartError, ValueError):
    pass


class ResourceLimit(AtompartError, RuntimeError):
    pass


def _env_cap():
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgument(f"{CAP_ENV_VAR} must be an integer, got {raw!r}")


def enumeration_cap():
    cap = _env_cap()
    return DEFAULT_ENUMERATION_CAP if cap is None else cap


def general_cap():
    cap = _env_cap()
    return DEFAULT_GENERAL_CAP if cap is None else cap


def oracle_cap():
    cap = _env_cap()
    return DEFAULT_ORACLE_CAP if cap is None else cap
