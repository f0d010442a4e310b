"""Package-wide exception types."""


class NoiseCtrlError(Exception):
    """Base class for all errors raised by this package."""


class ReachabilityError(NoiseCtrlError):
    """Requested transfer violates a reachability condition (e.g. target not majorised)."""


class ConfigurationError(NoiseCtrlError):
    """A system, sequence or experiment configuration is inconsistent."""


class NumericalHealthError(NoiseCtrlError):
    """A propagated state violated its invariants beyond tolerance."""
