"""The Poisson zeta function zeta_P(beta) = sum_k P_k^{-beta} over unit-intensity Poisson arrivals.

The series only converges for Re beta > 1. The compensated version
    zeta~_P(beta; T) = sum_{P_k <= T} P_k^{-beta} - int_1^T t^{-beta} dt
is an L^2-bounded martingale in T for Re beta > 1/2, and zeta_P = zeta~_P + 1/(beta - 1) continues
zeta_P meromorphically to Re beta > 1/2 with a single pole at 1.

Sums over arrivals go through the compensated partition kernels with X_k = Y_k = -log P_k,
since P_k^{-beta} = exp(sigma X_k + i tau Y_k).
"""

import cmath
import math
from typing import Optional, Tuple, Union

import jax
import jax.numpy as jnp
import numpy as np
from flax import struct
from joblib import Parallel, delayed

from cremjax.errors import PoleError, ZetaDomainError
from cremjax.partition.kernels import chunk_terms, log_largest_terms, run_paired_kernel
from cremjax.sampling.poisson import poisson_arrivals
from cremjax.sampling.streams import make_key
from cremjax.types import PoissonArrivals, Purpose, Rectangle, SeedPath
from cremjax.zeros.handles import AnalyticHandle

SLOW_CONVERGENCE_SIGMA = 0.55
POLE_RADIUS = 1e-6
BETA_BLOCK = 32
# arrivals are materialized, so horizons chosen from a tolerance are capped here
MAX_HORIZON = 1e6


@struct.dataclass
class ZetaPSample:
    """Raw arrivals on [0, horizon], so one sample can be evaluated coherently at many beta."""

    arrivals: PoissonArrivals = struct.field(pytree_node=False)
    seed_path: Optional[SeedPath] = struct.field(pytree_node=False, default=None)

    @property
    def horizon(self) -> float:
        return self.arrivals.horizon

    @classmethod
    def from_arrivals(cls, arrivals, horizon: float) -> "ZetaPSample":
        """A sample on a fixed configuration of arrival times."""
        p = np.sort(np.asarray(arrivals, dtype=float))
        assert np.all(p > 0), "Arrival times must be positive"
        return cls(arrivals=PoissonArrivals(p=p[p <= horizon], horizon=float(horizon)))


def sample_zetap(horizon: float, seed_path: SeedPath) -> ZetaPSample:
    arrivals = poisson_arrivals(horizon, seed_path)
    return ZetaPSample(arrivals=arrivals, seed_path=seed_path)


def _check_beta(betas: np.ndarray):
    sigma_min = float(np.min(betas.real))
    if sigma_min <= 0.5:
        raise ZetaDomainError(f"The Poisson zeta function needs Re(beta) > 1/2, got {sigma_min}")
    if sigma_min < SLOW_CONVERGENCE_SIGMA:
        print(
            f"[Zeta] Warning: Re(beta) = {sigma_min:.4f} < {SLOW_CONVERGENCE_SIGMA}, the truncation converges slowly"
        )


def _compensator(betas: np.ndarray, horizon: float) -> np.ndarray:
    """int_1^T t^{-beta} dt = (T^{1-beta} - 1) / (1 - beta), log T at beta = 1."""
    log_T = math.log(horizon)
    one_minus = 1.0 - betas
    at_one = one_minus == 0
    safe = np.where(at_one, 1.0, one_minus)
    # expm1 keeps the closed form accurate next to beta = 1
    return np.where(at_one, log_T, np.expm1(safe * log_T) / safe)


def _arrival_sums(p: np.ndarray, betas: np.ndarray, weights: Optional[np.ndarray] = None) -> np.ndarray:
    if len(p) == 0:
        return np.zeros(len(betas), dtype=complex)
    x = jnp.asarray(-np.log(p))
    chunks = chunk_terms(x, x, None if weights is None else jnp.asarray(weights))
    results = []
    for start in range(0, len(betas), BETA_BLOCK):
        block = betas[start : start + BETA_BLOCK]
        shift = log_largest_terms(x, 1.0, block.real)
        re, im, _ = run_paired_kernel(chunks, block.real, block.imag, shift)
        results.append(np.exp(shift) * (re + 1j * im))
    return np.concatenate(results)


def _truncated_arrivals(sample: ZetaPSample, horizon: Optional[float]):
    if horizon is None:
        return sample.arrivals.p, sample.horizon
    assert 0 < horizon <= sample.horizon, (
        f"The evaluation horizon {horizon} must lie in (0, {sample.horizon}]"
    )
    p = sample.arrivals.p
    return p[p <= horizon], float(horizon)


def zetap_tilde_eval(
    sample: ZetaPSample,
    beta: Union[complex, np.ndarray],
    horizon: Optional[float] = None,
) -> Union[complex, np.ndarray]:
    """zeta~_P(beta; T) with T the sample horizon, or a smaller horizon on the same arrivals.

    Raises:
        ZetaDomainError: if Re(beta) <= 1/2
    """
    betas = np.atleast_1d(np.asarray(beta, dtype=complex))
    _check_beta(betas)
    p, T = _truncated_arrivals(sample, horizon)
    values = _arrival_sums(p, betas) - _compensator(betas, T)
    return complex(values[0]) if np.ndim(beta) == 0 else values


def _check_pole(betas: np.ndarray):
    distance = float(np.min(np.abs(betas - 1.0)))
    if distance < POLE_RADIUS:
        raise PoleError(
            f"beta is {distance:.3g} away from the pole at 1; use zetap_tilde_eval, whose value at 1 is the constant term"
        )


def zetap_eval(
    sample: ZetaPSample,
    beta: Union[complex, np.ndarray],
    horizon: Optional[float] = None,
) -> Union[complex, np.ndarray]:
    """zeta_P(beta) = zeta~_P(beta) + 1 / (beta - 1).

    Raises:
        PoleError: within 1e-6 of beta = 1
        ZetaDomainError: if Re(beta) <= 1/2
    """
    betas = np.atleast_1d(np.asarray(beta, dtype=complex))
    _check_pole(betas)
    values = zetap_tilde_eval(sample, betas, horizon) + 1.0 / (betas - 1.0)
    return complex(values[0]) if np.ndim(beta) == 0 else values


def zetap_tilde_deriv(
    sample: ZetaPSample,
    beta: Union[complex, np.ndarray],
    horizon: Optional[float] = None,
) -> Union[complex, np.ndarray]:
    """zeta~_P'(beta; T) = -sum log(P_k) P_k^{-beta} - d/dbeta int_1^T t^{-beta} dt, finite at beta = 1."""
    betas = np.atleast_1d(np.asarray(beta, dtype=complex))
    _check_beta(betas)
    p, T = _truncated_arrivals(sample, horizon)
    sums = _arrival_sums(p, betas, weights=-np.log(p)) if len(p) else np.zeros(len(betas), complex)
    # d/dbeta of int_1^T t^{-beta} dt = -int_1^T log(t) t^{-beta} dt
    log_T = math.log(T)
    one_minus = 1.0 - betas
    compensator_deriv = np.array(
        [
            -0.5 * log_T * log_T
            if u == 0
            else -(cmath.exp(u * log_T) * (u * log_T - 1.0) + 1.0) / (u * u)
            for u in one_minus
        ]
    )
    values = sums - compensator_deriv
    return complex(values[0]) if np.ndim(beta) == 0 else values


def zetap_deriv(
    sample: ZetaPSample,
    beta: Union[complex, np.ndarray],
    horizon: Optional[float] = None,
) -> Union[complex, np.ndarray]:
    """zeta_P'(beta) = zeta~_P'(beta) - 1 / (beta - 1)^2.

    Raises:
        PoleError: within 1e-6 of beta = 1
        ZetaDomainError: if Re(beta) <= 1/2
    """
    betas = np.atleast_1d(np.asarray(beta, dtype=complex))
    _check_pole(betas)
    values = zetap_tilde_deriv(sample, betas, horizon) - 1.0 / (betas - 1.0) ** 2
    return complex(values[0]) if np.ndim(beta) == 0 else values


def zetap_handle(
    sample: ZetaPSample,
    scale: complex = 1.0,
    domain: Optional[Rectangle] = None,
    tilde: bool = False,
) -> AnalyticHandle:
    """u -> zeta_P(scale * u) (or zeta~_P), as a zero-finder handle in the coordinate u."""

    def func(u):
        u = np.asarray(u, dtype=complex)
        evaluate = zetap_tilde_eval if tilde else zetap_eval
        return np.asarray(evaluate(sample, scale * u.ravel())).reshape(u.shape)

    def deriv(u):
        u = np.asarray(u, dtype=complex)
        derivative = zetap_tilde_deriv if tilde else zetap_deriv
        return scale * np.asarray(derivative(sample, scale * u.ravel())).reshape(u.shape)

    return AnalyticHandle(eval=func, deriv=deriv, domain=domain, name="zeta_P")


def zetap_tail_variance(sigma: float, horizon: float) -> float:
    """E|zeta~_P(beta; inf) - zeta~_P(beta; T)|^2 = T^{1-2 sigma} / (2 sigma - 1)."""
    if sigma <= 0.5:
        raise ZetaDomainError(f"The tail variance is infinite for Re(beta) = {sigma} <= 1/2")
    return horizon ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)


def zetap_tail_sd(sample: ZetaPSample, beta: complex) -> float:
    return math.sqrt(zetap_tail_variance(complex(beta).real, sample.horizon))


def zetap_choose_horizon(beta: complex, tol: float) -> float:
    """Smallest T >= 1 with tail standard deviation sqrt(T^{1-2 sigma} / (2 sigma - 1)) <= tol.

    Raises:
        ZetaDomainError: if Re(beta) <= 1/2, where no horizon reaches any tolerance
    """
    sigma = complex(beta).real
    assert tol > 0, f"The tolerance must be positive, got {tol}"
    if sigma <= 0.5:
        raise ZetaDomainError(f"No horizon reaches tol={tol} for Re(beta) = {sigma} <= 1/2")
    horizon = (tol * tol * (2.0 * sigma - 1.0)) ** (1.0 / (1.0 - 2.0 * sigma))
    return max(1.0, horizon)


def zetap_capped_horizon(beta: complex, tol: float) -> Tuple[float, bool]:
    """zetap_choose_horizon capped at MAX_HORIZON, and whether the capped horizon still reaches tol.

    A binding cap is reported with the tail standard deviation actually left at MAX_HORIZON.
    """
    horizon = zetap_choose_horizon(beta, tol)
    if horizon <= MAX_HORIZON:
        return horizon, True
    tail_sd = math.sqrt(zetap_tail_variance(complex(beta).real, MAX_HORIZON))
    print(
        f"[Zeta] Warning: tol={tol:.3g} needs a horizon of {horizon:.3g}, capped at {MAX_HORIZON:.3g}; "
        f"the tail standard deviation is {tail_sd:.3g}"
    )
    return MAX_HORIZON, False


def sample_tail_remainder(beta: complex, horizon: float, seed_path: SeedPath) -> complex:
    """A complex Gaussian draw R with the second moments of zeta~_P(beta; inf) - zeta~_P(beta; T).

    E|R|^2 = T^{1-2 sigma} / (2 sigma - 1) and E R^2 = T^{1-2 beta} / (2 beta - 1).
    """
    beta = complex(beta)
    abs_moment = zetap_tail_variance(beta.real, horizon)
    pseudo = cmath.exp((1.0 - 2.0 * beta) * math.log(horizon)) / (2.0 * beta - 1.0)
    covariance = 0.5 * np.array(
        [
            [abs_moment + pseudo.real, pseudo.imag],
            [pseudo.imag, abs_moment - pseudo.real],
        ]
    )
    # |E R^2| <= E|R|^2, so the matrix is positive semi-definite; eigh handles the singular case
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    root = eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))
    g = np.asarray(jax.random.normal(make_key(seed_path.with_purpose(Purpose.TAIL)), (2,), dtype=jnp.float64))
    re, im = root @ g
    return complex(re, im)


def _zero_count(strip: Rectangle, horizon: float, seed_path: SeedPath) -> int:
    from cremjax.zeros.locate import locate_zeros

    sample = sample_zetap(horizon, seed_path.with_purpose(Purpose.ZETA))
    return locate_zeros(zetap_handle(sample, domain=strip), strip).total_multiplicity


def zetap_zero_intensity(
    replicas: int,
    strip: Union[Rectangle, str],
    seed: int,
    tol: float = 1e-2,
    horizon: Optional[float] = None,
    n_jobs: int = 1,
) -> dict:
    """Measured zero intensity of zeta_P per unit area in a thin box, against (1/pi)(2 sigma - 1)^{-2}.

    The reference is a heuristic near sigma = 1/2 and is reported, never gated.
    """
    strip = Rectangle.parse(strip)
    if strip.sigma_min < SLOW_CONVERGENCE_SIGMA:
        raise ZetaDomainError(
            f"Zeros of zeta_P are not searched below Re(beta) = {SLOW_CONVERGENCE_SIGMA}, got {strip.sigma_min}"
        )
    if horizon is None:
        horizon, tol_met = zetap_capped_horizon(complex(strip.sigma_min, 0.0), tol)
    else:
        tol_met = math.sqrt(zetap_tail_variance(strip.sigma_min, horizon)) <= tol
    counts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_zero_count)(strip, horizon, SeedPath(seed=seed, replica=r))
        for r in range(replicas)
    )
    counts = np.asarray(counts, dtype=int)
    sigma_mid = strip.center.real
    return {
        "measured_intensity": float(counts.mean() / strip.area),
        "reference_intensity": 1.0 / (math.pi * (2.0 * sigma_mid - 1.0) ** 2),
        "mean_count": float(counts.mean()),
        "horizon": horizon,
        "tol_met": tol_met,
        "counts": counts,
    }
