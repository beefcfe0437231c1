"""Shared exception types (mapped to CLI exit codes in cli.py)."""


class ConfigError(ValueError):
    """Invalid configuration or parameter value. CLI exit code 2."""


class CapacityError(RuntimeError):
    """An exact/enumeration routine was asked for more than it can handle. CLI exit code 3."""


class DegenerateInstanceError(RuntimeError):
    """Total sampling potential hit zero while centers were still required."""
