"""Exception hierarchy shared across the package."""


class PCMError(Exception):
    """Base class for all errors raised by pcmrecon."""


class ShapeError(PCMError, ValueError):
    """Operands do not share a grid or have incompatible dimensions."""


class ResolutionError(PCMError, ValueError):
    """A grid is too coarse to resolve the finest wavelet scale."""


class ConfigError(PCMError, ValueError):
    """An experiment configuration is malformed or inconsistent."""


class SolverError(PCMError, RuntimeError):
    """An iterative solver failed to converge or produced non-finite values.

    Attributes
    ----------
    residual : float
        Last achieved (relative) residual, or ``nan`` if not applicable.
    iterations : int
        Number of iterations performed before giving up.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
