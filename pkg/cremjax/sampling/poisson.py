import jax
import jax.numpy as jnp
import numpy as np

from cremjax.sampling.streams import make_key
from cremjax.types import PoissonArrivals, SeedPath

# Arrivals are drawn in fixed-size blocks of exponential gaps, block b from fold_in(key, b).
# The block size does not depend on the horizon, so the arrivals up to T1 are a prefix of the
# arrivals up to any T2 > T1 on the same seed path.
BLOCK_SIZE = 4096


def poisson_arrivals(horizon: float, seed_path: SeedPath) -> PoissonArrivals:
    """Arrival times of a unit-intensity Poisson process on [0, horizon].

    Args:
        horizon (float): the horizon T > 0
        seed_path (SeedPath): the random stream

    Returns:
        PoissonArrivals: cumulative sums of unit exponentials, truncated at T
    """
    horizon = float(horizon)
    assert horizon > 0, f"The horizon must be positive, got {horizon}"
    key = make_key(seed_path)
    blocks = []
    offset = 0.0
    block_idx = 0
    while offset <= horizon:
        gaps = jax.random.exponential(
            jax.random.fold_in(key, block_idx), (BLOCK_SIZE,), dtype=jnp.float64
        )
        arrivals = offset + np.cumsum(np.asarray(gaps))
        blocks.append(arrivals)
        offset = float(arrivals[-1])
        block_idx += 1
    p = np.concatenate(blocks)
    return PoissonArrivals(p=p[p <= horizon], horizon=horizon)
