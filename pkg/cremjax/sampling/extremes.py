import math

import jax
import numpy as np

from cremjax.errors import ParameterRangeError
from cremjax.partition.evaluation import compute_bn
from cremjax.types import SampleBatch


def extremal_rescaled_points(batch: SampleBatch, n: float, K: int = 10) -> np.ndarray:
    """sqrt(n) (X_(k) - b_N) for the K largest energies, in decreasing order.

    As N grows these points converge to the Poisson process with intensity sqrt(2) e^{-sqrt(2) x} dx.

    Raises:
        ParameterRangeError: if the batch is empty or K exceeds its size
    """
    N = len(batch)
    if N == 0:
        raise ParameterRangeError("The batch is empty")
    if not 1 <= K <= N:
        raise ParameterRangeError(f"K must lie in [1, N={N}], got {K}")
    top, _ = jax.lax.top_k(batch.x, K)
    return math.sqrt(n) * (np.asarray(top) - compute_bn(n))


def poisson_frame_from_extremes(points: np.ndarray) -> np.ndarray:
    """exp(-sqrt(2) x): maps the rescaled extremes to (approximate) unit-intensity arrivals, increasing."""
    return np.sort(np.exp(-math.sqrt(2.0) * np.asarray(points, dtype=float)))
