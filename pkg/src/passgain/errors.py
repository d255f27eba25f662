"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario configuration (bad value, unknown key, infeasible geometry)."""


class NumericsError(RuntimeError):
    """A numerical routine failed to converge or lost its bracket."""
