"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid configuration value or structure. CLI exit code 1."""


class VerificationError(RuntimeError):
    """A verification check failed. CLI exit code 2."""
