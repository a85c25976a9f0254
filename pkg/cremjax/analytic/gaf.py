"""The plane Gaussian analytic function G(t) = sum_k xi_k t^k / sqrt(k!)."""

import math
from typing import Optional, Tuple, Union

import numpy as np
from flax import struct
from joblib import Parallel, delayed
from scipy.special import gammaln

from cremjax.errors import GafDomainError
from cremjax.sampling.gaussian import standard_complex_normal
from cremjax.types import Purpose, SeedPath
from cremjax.zeros.handles import AnalyticHandle, Disk


def truncation_order(radius: float) -> int:
    """K = ceil(e R^2 + 40): the tail beyond K has standard deviation below 1e-8 e^{R^2/2} on |t| <= R."""
    assert radius >= 0, f"The radius must be non-negative, got {radius}"
    return int(math.ceil(math.e * radius * radius + 40))


@struct.dataclass
class GafSample:
    """The coefficients xi_0..xi_K of one GAF replica, certified on the disk |t| <= radius."""

    coeffs: np.ndarray = struct.field(pytree_node=False)
    truncation_K: int = struct.field(pytree_node=False)
    radius: float = struct.field(pytree_node=False)

    def __post_init__(self):
        assert (
            len(self.coeffs) == self.truncation_K + 1
        ), f"Expected {self.truncation_K + 1} coefficients, got {len(self.coeffs)}"

    def conjugate(self) -> "GafSample":
        return self.replace(coeffs=np.conj(self.coeffs))


def sample_gaf(radius: float, seed_path: SeedPath) -> GafSample:
    K = truncation_order(radius)
    coeffs = np.asarray(standard_complex_normal(seed_path.with_purpose(Purpose.GAF), (K + 1,)))
    return GafSample(coeffs=coeffs, truncation_K=K, radius=float(radius))


def _check_disk(sample: GafSample, t: np.ndarray):
    # a relative slack of 1e-12 lets points sitting exactly on the certified circle through
    if np.any(np.abs(t) > sample.radius * (1 + 1e-12) + 1e-15):
        raise GafDomainError(
            f"|t| = {float(np.max(np.abs(t))):.6g} exceeds the certified radius {sample.radius}"
        )


def _scaled_coeffs(sample: GafSample) -> np.ndarray:
    k = np.arange(sample.truncation_K + 1)
    return sample.coeffs * np.exp(-0.5 * gammaln(k + 1))


def gaf_eval(sample: GafSample, t: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Horner evaluation of the truncated series.

    Raises:
        GafDomainError: if |t| exceeds the radius the truncation was certified for
    """
    t_arr = np.asarray(t, dtype=complex)
    _check_disk(sample, t_arr)
    values = np.polyval(_scaled_coeffs(sample)[::-1], t_arr)
    return complex(values) if values.ndim == 0 else values


def gaf_deriv(sample: GafSample, t: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """G'(t) = sum_k k xi_k t^{k-1} / sqrt(k!)."""
    t_arr = np.asarray(t, dtype=complex)
    _check_disk(sample, t_arr)
    derivative = np.polyder(_scaled_coeffs(sample)[::-1])
    values = np.polyval(derivative, t_arr)
    return complex(values) if values.ndim == 0 else values


def gaf_handle(sample: GafSample, center: complex = 0j, radius: Optional[float] = None) -> AnalyticHandle:
    radius = sample.radius if radius is None else radius
    return AnalyticHandle(
        eval=lambda t: gaf_eval(sample, t),
        deriv=lambda t: gaf_deriv(sample, t),
        domain=Disk(center=complex(center), radius=float(radius)),
        name="GAF",
    )


def _count_in_disk(radius: float, center: complex, seed_path: SeedPath) -> int:
    from cremjax.zeros.locate import zeros_in_disk

    if radius == 0:
        return 0
    # the search square around the disk must be inside the certified disk
    sample = sample_gaf(abs(center) + radius * math.sqrt(2) + 1e-6, seed_path)
    zs = zeros_in_disk(gaf_handle(sample), center, radius)
    return zs.total_multiplicity


def gaf_zero_stats(
    radius: float,
    replicas: int,
    seed: int,
    center: complex = 0j,
    n_jobs: int = 1,
) -> Tuple[float, np.ndarray]:
    """Zero counts of independent GAF replicas in the disk |t - center| <= radius.

    The zero process has intensity 1/pi, so the mean count approaches radius^2.

    Returns:
        Tuple[float, np.ndarray]: (mean count, per-replica counts)
    """
    assert replicas >= 1, f"At least one replica is needed, got {replicas}"
    counts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_count_in_disk)(radius, complex(center), SeedPath(seed=seed, replica=r))
        for r in range(replicas)
    )
    counts = np.asarray(counts, dtype=int)
    return float(counts.mean()), counts
