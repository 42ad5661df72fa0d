"""Exception hierarchy shared by all qftline subpackages."""


class QftLineError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(QftLineError):
    """Missing or invalid configuration value."""


class CircuitError(QftLineError):
    """Ill-formed operation or circuit."""


class SerializationError(QftLineError):
    """Malformed circuit document, unknown gate kind or version mismatch."""


class SimulationError(QftLineError):
    """Invalid simulator input or unsupported circuit structure."""


class BuilderError(QftLineError):
    """Invalid builder parameters or register layout."""


class AnalysisError(QftLineError):
    """Invalid parameters for a closed-form quantity or oracle."""


class InvalidParameterError(BuilderError, AnalysisError):
    """Parameter combination outside the construction's domain, such as a block size with ``2k`` not dividing ``n``."""
