class KelvinWalkError(Exception):
    pass


class DomainError(KelvinWalkError, ValueError):
    """A point lies outside the region an operation is defined on."""


class ConfigError(KelvinWalkError, ValueError):
    """Malformed boundary data or run configuration."""


class InvariantError(KelvinWalkError, RuntimeError):
    """An internal precondition broke (should not happen with valid inputs)."""
