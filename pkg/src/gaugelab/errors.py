"""Exception types raised across gaugelab."""


class GaugeLabError(Exception):
    """Base class for all gaugelab errors."""


class GridMismatch(GaugeLabError):
    pass


class DimensionUnsupported(GaugeLabError):
    pass


class BoundaryUnsupported(GaugeLabError):
    pass


class IncompatibleSource(GaugeLabError):
    pass


class NotNormalized(GaugeLabError):
    pass


class NotPeriodic(GaugeLabError):
    """Gauge function is not single-valued on a periodic grid."""


class SizeExceeded(GaugeLabError):
    pass


class NoConvergence(GaugeLabError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InsufficientData(GaugeLabError):
    pass


class PropagationFailure(GaugeLabError):
    pass


class NotStationary(GaugeLabError):
    pass


class ConfigError(GaugeLabError):
    pass
