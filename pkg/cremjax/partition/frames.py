"""Local frames around a point beta0 and the normalized processes that live in them.

Each frame is an affine change of variable beta = offset + scale * t:

    sqrt_n_B3   beta0 in B3          beta = beta0 + t / sqrt(n)
    boundary13  beta0 on B1|B3 arc   beta = beta0 (1 + (t + i delta_N) / n)
    boundary12  beta0 on B1|B2 line  beta = beta0 + e^{-i angle} (t + d_N) / n

The value of the frame at t is the normalized partition function whose weak limit is known:
G_N(t) for sqrt_n_B3, Z_N / N^{1/2 + (sigma0 + beta0 (t + i delta_N) / n)^2} for boundary13 and
e^{-beta sqrt(n) b_N} Z_N for boundary12. All frames need the rho = 1 model.
"""

import cmath
import math
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from cremjax.core.phases import SQRT2, SQRT_HALF, classify
from cremjax.errors import BoundaryError, FrameError
from cremjax.partition.evaluation import (
    compute_bn,
    derivative_weights,
    eval_points,
)
from cremjax.specfun.moments import log_truncated_exp_moment
from cremjax.types import ComplexParam, PhaseLabel, SampleBatch
from cremjax.zeros.handles import AnalyticHandle, Domain

BOUNDARY_TOL = 1e-9
DEFAULT_BOUNDARY12_ANGLE = 2 * math.pi / 3


class Frame(str, Enum):
    sqrt_n_B3 = "sqrt_n_B3"
    boundary13 = "boundary13"
    boundary12 = "boundary12"


def delta_n(beta0: Union[ComplexParam, complex], n: float) -> float:
    """delta_N = n sigma0 tau0 reduced mod 2 pi into [0, 2 pi).

    Raises:
        BoundaryError: unless sigma0^2 + tau0^2 = 1 and sigma0^2 < 1/2 (tolerance 1e-9)
    """
    beta0 = ComplexParam.parse(beta0)
    sigma0, tau0 = beta0.sigma, beta0.tau
    if abs(sigma0**2 + tau0**2 - 1.0) >= BOUNDARY_TOL or not sigma0**2 < 0.5:
        raise BoundaryError(f"{beta0} is not on the boundary between B1 and B3")
    x = n * sigma0 * tau0
    delta = math.fmod(x, 2 * math.pi)
    if delta < 0:
        delta += 2 * math.pi
    # a lattice point k 2 pi / n can land a rounding error below 2 pi
    if delta < BOUNDARY_TOL * max(1.0, abs(x)) or 2 * math.pi - delta < BOUNDARY_TOL * max(1.0, abs(x)):
        return 0.0
    return delta


def d_n_prime(beta0: Union[ComplexParam, complex], n: float) -> complex:
    """The representative of i tau0^2 n - beta0 log(4 pi n) / (2 sqrt 2) mod 2 pi i with imaginary part in [-pi, pi)."""
    beta0 = ComplexParam.parse(beta0)
    sigma0, tau0 = beta0.sigma, beta0.tau
    if not (sigma0 > SQRT_HALF and tau0 > 0 and abs(sigma0 + tau0 - SQRT2) < BOUNDARY_TOL):
        raise BoundaryError(
            f"{beta0} is not on the segment sigma + tau = sqrt(2), sigma > 1/sqrt(2), tau > 0"
        )
    raw = 1j * tau0 * tau0 * n - beta0.beta * math.log(4 * math.pi * n) / (2 * SQRT2)
    imag = math.fmod(raw.imag + math.pi, 2 * math.pi)
    if imag < 0:
        imag += 2 * math.pi
    return complex(raw.real, imag - math.pi)


def d_n(beta0: Union[ComplexParam, complex], n: float) -> complex:
    """d_N = d_N' / (sqrt(2) tau0), of order log n."""
    beta0 = ComplexParam.parse(beta0)
    return d_n_prime(beta0, n) / (SQRT2 * beta0.tau)


def frame_map(
    beta0: Union[ComplexParam, complex],
    n: float,
    frame: Union[Frame, str],
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
) -> Tuple[complex, complex]:
    """(offset, scale) of the affine map beta = offset + scale * t.

    Raises:
        FrameError: if beta0 is not in the validity region of the frame
    """
    beta0 = ComplexParam.parse(beta0)
    frame = Frame(frame)
    if frame == Frame.sqrt_n_B3:
        if classify(beta0) != PhaseLabel.B3:
            raise FrameError(f"The sqrt_n_B3 frame needs beta0 in B3, got {beta0} in {classify(beta0).value}")
        return beta0.beta, complex(1.0 / math.sqrt(n))
    try:
        if frame == Frame.boundary13:
            delta = delta_n(beta0, n)
            return beta0.beta * (1 + 1j * delta / n), beta0.beta / n
        rotation = cmath.exp(-1j * angle)
        return beta0.beta + rotation * d_n(beta0, n) / n, rotation / n
    except BoundaryError as e:
        raise FrameError(f"Frame {frame.value} does not apply at {beta0}: {e}") from e


def _check_rho_one(batch: SampleBatch):
    if batch.rho != 1.0:
        raise FrameError(f"Local frames are defined for rho = 1, got rho = {batch.rho}")


def _log_normalizer(
    beta0: ComplexParam, n: float, frame: Frame, t: np.ndarray, betas: np.ndarray, offset: complex
) -> np.ndarray:
    if frame == Frame.sqrt_n_B3:
        return n * (0.5 + (beta0.sigma + t / math.sqrt(n)) ** 2)
    if frame == Frame.boundary13:
        # beta - i tau0 = sigma0 + beta0 (t + i delta_N) / n
        return n * (0.5 + (betas - 1j * beta0.tau) ** 2)
    return betas * math.sqrt(n) * compute_bn(n)


def local_frame_eval(
    batch: SampleBatch,
    n: float,
    beta0: Union[ComplexParam, complex],
    frame: Union[Frame, str],
    t: Union[complex, np.ndarray],
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
) -> Union[complex, np.ndarray]:
    """The normalized process of the frame at t (scalar or array).

    sqrt_n_B3 gives G_N(t) = (Z_N(beta) - N^{1 + beta^2/2}) / N^{1/2 + (sigma0 + t/sqrt(n))^2},
    whose covariance E[G_N(t) conj G_N(s)] is e^{-(t - conj s)^2/2} up to exponentially small terms.

    Raises:
        FrameError: frame/point mismatch, or rho != 1
    """
    _check_rho_one(batch)
    beta0 = ComplexParam.parse(beta0)
    frame = Frame(frame)
    offset, scale = frame_map(beta0, n, frame, angle)
    t_arr = np.atleast_1d(np.asarray(t, dtype=complex))
    betas = offset + scale * t_arr
    shift, scaled = eval_points(batch, n, betas)
    log_norm = _log_normalizer(beta0, n, frame, t_arr, betas, offset)
    values = np.exp(shift - log_norm) * scaled
    if frame == Frame.sqrt_n_B3:
        log_mean = n * (1.0 + betas**2 / 2.0)
        values = values - np.exp(log_mean - log_norm)
    return complex(values[0]) if np.ndim(t) == 0 else values


def partition_handle(
    batch: SampleBatch,
    n: float,
    domain: Optional[Domain] = None,
    offset: complex = 0j,
    scale: complex = 1.0 + 0j,
    reference_sigma: Optional[float] = None,
) -> AnalyticHandle:
    """t -> e^{-c} Z_N(offset + scale t), c the log largest term at reference_sigma.

    The constant factor keeps values in double range and leaves the zeros unchanged. The analytic
    derivative sum_k sqrt(n) X_k e^{beta sqrt(n) X_k} is attached when rho = 1.
    """
    if reference_sigma is None:
        reference_sigma = offset.real
    sqrt_n = math.sqrt(n)
    x_max, x_min = float(np.max(batch.x)), float(np.min(batch.x))
    reference = reference_sigma * sqrt_n * (x_max if reference_sigma >= 0 else x_min)

    def func(t: np.ndarray) -> np.ndarray:
        shift, scaled = eval_points(batch, n, offset + scale * np.ravel(t))
        return (np.exp(shift - reference) * scaled).reshape(np.shape(t))

    deriv = None
    if batch.rho == 1.0:
        weights = derivative_weights(batch, n)

        def deriv(t: np.ndarray) -> np.ndarray:
            shift, scaled = eval_points(batch, n, offset + scale * np.ravel(t), weights)
            return (scale * np.exp(shift - reference) * scaled).reshape(np.shape(t))

    return AnalyticHandle(eval=func, deriv=deriv, domain=domain, name=f"Z_N(n={n:.3f})")


def frame_handle(
    batch: SampleBatch,
    n: float,
    beta0: Union[ComplexParam, complex],
    frame: Union[Frame, str],
    domain: Optional[Domain] = None,
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
) -> AnalyticHandle:
    """Z_N in the frame coordinate t, up to a constant factor; its zeros are those of the frame process
    for the boundary frames and those of Z_N near beta0 for sqrt_n_B3."""
    _check_rho_one(batch)
    beta0 = ComplexParam.parse(beta0)
    offset, scale = frame_map(beta0, n, frame, angle)
    return partition_handle(batch, n, domain, offset=offset, scale=scale, reference_sigma=beta0.sigma)


def xi_n_eval(batch: SampleBatch, n: float, beta: Union[ComplexParam, complex]) -> complex:
    """(Z_N(beta) - N E[e^{beta sqrt(n) X} 1_{X < b_N}]) / e^{beta sqrt(n) b_N}, rho = 1.

    For beta in B2 this converges weakly to the truncated Poisson zeta function at beta / sqrt(2).
    """
    _check_rho_one(batch)
    beta = ComplexParam.parse(beta).beta
    sqrt_n = math.sqrt(n)
    b_N = compute_bn(n)
    log_scale = beta * sqrt_n * b_N
    shift, scaled = eval_points(batch, n, np.array([beta]))
    log_center = math.log(len(batch)) + log_truncated_exp_moment(beta * sqrt_n, b_N)
    return complex(np.exp(shift[0] - log_scale) * scaled[0] - cmath.exp(log_center - log_scale))
