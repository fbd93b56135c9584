"""Error types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when system, sweep, or training parameters are inconsistent."""
