"""Stable variates by the Chambers-Mallows-Stuck transform.

Scale convention: the natural one of the transform. For alpha_half = 1/2 the positive stable
law is the Levy distribution with location 0 and scale 1.
"""

from typing import Optional, Tuple, Union

import jax
import jax.numpy as jnp
import numpy as np

from cremjax.errors import ParameterRangeError
from cremjax.sampling.streams import make_key
from cremjax.types import SeedPath


def _positive_stable_from_key(
    key: jax.Array, alpha_half: float, shape: Tuple[int, ...]
) -> jnp.ndarray:
    key_v, key_w = jax.random.split(key)
    # uniform angle on (-pi/2, pi/2) and a unit exponential
    v = jax.random.uniform(
        key_v, shape, dtype=jnp.float64, minval=-jnp.pi / 2, maxval=jnp.pi / 2
    )
    w = jax.random.exponential(key_w, shape, dtype=jnp.float64)
    a = alpha_half
    # skewness 1: the shift is pi/2 and the scale factor cos(pi a / 2)^{-1/a}
    b = jnp.pi / 2
    s = jnp.cos(jnp.pi * a / 2) ** (-1.0 / a)
    return (
        s
        * jnp.sin(a * (v + b))
        / jnp.cos(v) ** (1.0 / a)
        * (jnp.cos(v - a * (v + b)) / w) ** ((1.0 - a) / a)
    )


def positive_stable(
    alpha_half: float, seed_path: SeedPath, size: Optional[int] = None
) -> Union[float, np.ndarray]:
    """Totally skewed positive stable variate(s) of index alpha_half in (0, 1).

    Args:
        alpha_half (float): the stability index
        seed_path (SeedPath): the random stream
        size (Optional[int]): number of draws, a single float when None

    Raises:
        ParameterRangeError: if alpha_half is not in (0, 1)
    """
    if not 0.0 < alpha_half < 1.0:
        raise ParameterRangeError(f"alpha_half must lie in (0, 1), got {alpha_half}")
    shape = () if size is None else (int(size),)
    draws = _positive_stable_from_key(make_key(seed_path), float(alpha_half), shape)
    return float(draws) if size is None else np.asarray(draws)


def isotropic_stable_complex(
    alpha: float, seed_path: SeedPath, size: Optional[int] = None
) -> Union[complex, np.ndarray]:
    """Rotation-invariant complex alpha-stable variate(s), alpha in (0, 2).

    Sub-Gaussian representation sqrt(A) (G1 + i G2), A positive (alpha/2)-stable and G1, G2
    independent standard normal. Isotropy is exact by construction.

    Raises:
        ParameterRangeError: if alpha is not in (0, 2)
    """
    if not 0.0 < alpha < 2.0:
        raise ParameterRangeError(f"alpha must lie in (0, 2), got {alpha}")
    shape = () if size is None else (int(size),)
    key_a, key_g = jax.random.split(make_key(seed_path))
    a = _positive_stable_from_key(key_a, float(alpha) / 2.0, shape)
    g = jax.random.normal(key_g, shape + (2,), dtype=jnp.float64)
    draws = jnp.sqrt(a) * (g[..., 0] + 1j * g[..., 1])
    return complex(draws) if size is None else np.asarray(draws)
