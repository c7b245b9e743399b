class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap."""


class IdealError(ValueError):
    """A lowest-degree ideal is not admissible."""


class ConfigError(ValueError):
    """A run configuration could not be parsed or validated."""
