"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Inconsistent shapes, specs, or configuration values."""


class CapacityError(ConfigError):
    """A request exceeds a hard size cap (exhaustive search, vanilla DQN head)."""


class TrainingDiverged(RuntimeError):
    """Non-finite loss or gradients; the run is aborted with diagnostics."""
