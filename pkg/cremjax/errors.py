from typing import Any, Optional


class CremError(Exception):
    """Base class of all errors raised by cremjax."""


# ================ Configuration and precision ================


class PrecisionBudgetError(CremError, ValueError):
    """The requested system size exceeds the double-precision budget."""


class MemoryBudgetError(CremError, MemoryError):
    """An evaluation would allocate more than the configured memory budget."""


class ParameterRangeError(CremError, ValueError):
    """A distribution parameter lies outside its admissible range."""


# ================ Quadrature and special functions ================


class QuadratureError(CremError, RuntimeError):
    """An adaptive quadrature did not converge."""


class MeshTooCoarseError(CremError, ValueError):
    """The grid mesh is too coarse for the support of the test function."""


class SupportError(CremError, ValueError):
    """A test function is not supported where the caller claims it is."""


class SaddleRegimeError(CremError, ValueError):
    """The saddle-point regime cannot be decided from the supplied data."""


# ================ Partition function and frames ================


class FrameError(CremError, ValueError):
    """The base point or the batch does not fit the requested local frame."""


class BoundaryError(CremError, ValueError):
    """The base point is not on the required phase boundary."""


# ================ Limiting analytic functions ================


class ZetaDomainError(CremError, ValueError):
    """The Poisson zeta function is evaluated outside Re(beta) > 1/2."""


class PoleError(CremError, ValueError):
    """Evaluation too close to the pole of the Poisson zeta function at 1."""


class GafDomainError(CremError, ValueError):
    """The point lies outside the disk certified by the GAF truncation."""


# ================ Zero finding ================


class BoundaryZeroError(CremError, ArithmeticError):
    """The function nearly vanishes on a contour, so its winding is unreliable."""

    def __init__(self, message: str, min_modulus: float, max_modulus: float):
        super().__init__(message)
        self.min_modulus = min_modulus
        self.max_modulus = max_modulus


class WindingResolutionError(CremError, ArithmeticError):
    """The phase along an edge could not be resolved within the sampling cap."""


class MaxDepthExceededError(CremError, RuntimeError):
    """The subdivision reached its depth limit with an unresolved cell."""

    def __init__(self, message: str, cell: Any, count: int):
        super().__init__(message)
        self.cell = cell
        self.count = count


class InsufficientZerosError(CremError, ValueError):
    """Too few zeros to form spacings."""


class WindowError(CremError, ValueError):
    """A search window leaves the region where its limit statement holds."""


class ExcludedTriangleError(CremError, ValueError):
    """The region meets the triangle where the zeta approximation breaks down."""


# ================ Fluctuations ================


class PlanError(CremError, ValueError):
    """No normalization is available at this parameter point."""


class InsufficientReplicasError(CremError, ValueError):
    """The ensemble is too small for the requested test."""


class LimitMismatchError(CremError, ValueError):
    """The ensemble's plan does not have the limit law the test expects."""


class StableRegressionError(CremError, ArithmeticError):
    """The characteristic-function regression for the stable exponent is ill-conditioned."""


class GatedTestFailure(CremError):
    """A gated statistical test failed; maps to exit status 2."""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report
