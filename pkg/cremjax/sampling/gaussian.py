from typing import Union

import jax
import jax.numpy as jnp

from cremjax.sampling.streams import make_key
from cremjax.types import Purpose, RemConfig, SampleBatch, SeedPath


def as_seed_path(cfg: RemConfig, stream: Union[int, SeedPath], purpose: Purpose) -> SeedPath:
    if isinstance(stream, SeedPath):
        return stream
    return SeedPath(seed=cfg.seed, replica=int(stream), purpose=int(purpose))


def gaussian_pairs(cfg: RemConfig, stream: Union[int, SeedPath]) -> SampleBatch:
    """Draw the N pairs (X_k, Y_k) of one realization of the model.

    X_k are i.i.d. standard normal and Y_k = rho X_k + sqrt(1 - rho^2) W_k with W_k an independent
    standard normal sample. Normals come from jax.random.normal (inverse error function applied
    to Threefry uniforms), fixed once for the whole lab so batches are bit-reproducible.

    Args:
        cfg (RemConfig): the model parameters (N, rho, seed)
        stream (Union[int, SeedPath]): the replica index, or an explicit seed path

    Returns:
        SampleBatch: the pairs, tagged with their seed path
    """
    seed_path = as_seed_path(cfg, stream, Purpose.PAIRS)
    key_x, key_w = jax.random.split(make_key(seed_path))
    x = jax.random.normal(key_x, (cfg.N,), dtype=jnp.float64)
    rho = float(cfg.rho)
    if rho == 1.0:
        y = x
    elif rho == -1.0:
        y = -x
    else:
        w = jax.random.normal(key_w, (cfg.N,), dtype=jnp.float64)
        y = rho * x + jnp.sqrt(1.0 - rho * rho) * w
    return SampleBatch(x=x, y=y, rho=rho, seed_path=seed_path)


def standard_complex_normal(seed_path: SeedPath, shape) -> jnp.ndarray:
    """i.i.d. standard complex Gaussians, E|xi|^2 = 1."""
    key_re, key_im = jax.random.split(make_key(seed_path))
    scale = jnp.sqrt(0.5)
    return scale * (
        jax.random.normal(key_re, shape, dtype=jnp.float64)
        + 1j * jax.random.normal(key_im, shape, dtype=jnp.float64)
    )
