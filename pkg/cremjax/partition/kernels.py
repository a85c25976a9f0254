"""Jitted summation kernels for Z_N(beta) = sum_k exp(sqrt(n) (sigma X_k + i tau Y_k)).

The N terms are processed in fixed chunks of CHUNK (the tail chunk is zero-padded and masked)
by a lax.scan, so the reduction order only depends on N. Every term is divided by the largest
term modulus exp(M) before summation, and the chunk partial sums are accumulated with TwoSum
compensation on the real part, the imaginary part and the sum of moduli.

Two kernels:
    grid kernel: sigma axis x tau axis, one real exponential per (sigma, k) and one unit
        rotation per (tau, k), combined by matrix products
    paired kernel: arbitrary points beta_p, with optional real weights per term
"""

from typing import Optional, Tuple

import jax
import jax.numpy as jnp
import numpy as np

CHUNK = 4096
# the paired kernel is compiled for point counts rounded up to powers of two, at most POINT_BLOCK
POINT_BLOCK = 256


def _two_sum(a: jnp.ndarray, b: jnp.ndarray) -> Tuple[jnp.ndarray, jnp.ndarray]:
    """s + err == a + b exactly, s = fl(a + b)."""
    s = a + b
    b_virtual = s - a
    err = (a - (s - b_virtual)) + (b - b_virtual)
    return s, err


def _accumulate(carry, partials):
    new_carry = []
    for (total, compensation), partial_sum in zip(carry, partials):
        total, err = _two_sum(total, partial_sum)
        new_carry.append((total, compensation + err))
    return tuple(new_carry)


def _rotation(theta: jnp.ndarray) -> Tuple[jnp.ndarray, jnp.ndarray]:
    """cos and sin evaluated on |theta| so that theta -> -theta conjugates exactly."""
    abs_theta = jnp.abs(theta)
    return jnp.cos(abs_theta), jnp.sign(theta) * jnp.sin(abs_theta)


def chunk_terms(x: jnp.ndarray, y: jnp.ndarray, weights: Optional[jnp.ndarray] = None):
    """Reshape the batch into (n_chunks, CHUNK) blocks with a validity mask."""
    N = x.shape[0]
    n_chunks = -(-N // CHUNK)
    pad = n_chunks * CHUNK - N
    mask = jnp.concatenate([jnp.ones(N, dtype=bool), jnp.zeros(pad, dtype=bool)])
    x_chunks = jnp.pad(x, (0, pad)).reshape(n_chunks, CHUNK)
    y_chunks = jnp.pad(y, (0, pad)).reshape(n_chunks, CHUNK)
    w = jnp.ones(N, dtype=x.dtype) if weights is None else weights
    w_chunks = jnp.pad(w, (0, pad)).reshape(n_chunks, CHUNK)
    return x_chunks, y_chunks, w_chunks, mask.reshape(n_chunks, CHUNK)


def log_largest_terms(x: np.ndarray, sqrt_n: float, sigmas: np.ndarray) -> np.ndarray:
    """M = max_k sigma sqrt(n) X_k, per sigma."""
    x_max, x_min = float(jnp.max(x)), float(jnp.min(x))
    a = np.asarray(sigmas, dtype=float) * sqrt_n
    return np.where(a >= 0, a * x_max, a * x_min)


@jax.jit
def grid_kernel(x_chunks, y_chunks, mask_chunks, a_sigma, b_tau, shift):
    """Scaled sums on a tensor grid.

    Args:
        x_chunks, y_chunks, mask_chunks: (n_chunks, CHUNK) chunked batch
        a_sigma: (S,) sigma * sqrt(n)
        b_tau: (T,) tau * sqrt(n)
        shift: (S,) the log largest term modulus per sigma

    Returns:
        (re, im, abs_sum): (S, T), (S, T) and (S,) arrays of exp(-shift) * sums
    """
    S, T = a_sigma.shape[0], b_tau.shape[0]

    def body(carry, chunk):
        x, y, mask = chunk
        moduli = jnp.where(
            mask[None, :], jnp.exp(a_sigma[:, None] * x[None, :] - shift[:, None]), 0.0
        )
        cos_part, sin_part = _rotation(b_tau[:, None] * y[None, :])
        partials = (moduli @ cos_part.T, moduli @ sin_part.T, moduli.sum(axis=1))
        return _accumulate(carry, partials), None

    zeros_grid = jnp.zeros((S, T))
    zeros_row = jnp.zeros((S,))
    init = ((zeros_grid, zeros_grid), (zeros_grid, zeros_grid), (zeros_row, zeros_row))
    carry, _ = jax.lax.scan(body, init, (x_chunks, y_chunks, mask_chunks))
    (re, c_re), (im, c_im), (ab, c_ab) = carry
    return re + c_re, im + c_im, ab + c_ab


@jax.jit
def paired_kernel(x_chunks, y_chunks, w_chunks, mask_chunks, a, b, shift):
    """Scaled weighted sums at P arbitrary points: sum_k w_k exp(a_p X_k + i b_p Y_k - shift_p).

    Returns:
        (re, im, abs_sum): three (P,) arrays
    """
    P = a.shape[0]

    def body(carry, chunk):
        x, y, w, mask = chunk
        moduli = jnp.where(
            mask[None, :], jnp.exp(a[:, None] * x[None, :] - shift[:, None]), 0.0
        )
        weighted = moduli * w[None, :]
        cos_part, sin_part = _rotation(b[:, None] * y[None, :])
        partials = (
            jnp.sum(weighted * cos_part, axis=1),
            jnp.sum(weighted * sin_part, axis=1),
            jnp.sum(jnp.abs(weighted), axis=1),
        )
        return _accumulate(carry, partials), None

    zeros = jnp.zeros((P,))
    init = ((zeros, zeros), (zeros, zeros), (zeros, zeros))
    carry, _ = jax.lax.scan(body, init, (x_chunks, y_chunks, w_chunks, mask_chunks))
    (re, c_re), (im, c_im), (ab, c_ab) = carry
    return re + c_re, im + c_im, ab + c_ab


def _bucket(size: int) -> int:
    bucket = 1
    while bucket < size:
        bucket *= 2
    return min(bucket, POINT_BLOCK)


def run_paired_kernel(chunks, a: np.ndarray, b: np.ndarray, shift: np.ndarray):
    """Evaluate the paired kernel on any number of points, in padded blocks of at most POINT_BLOCK."""
    x_chunks, y_chunks, w_chunks, mask_chunks = chunks
    P = a.shape[0]
    outputs = ([], [], [])
    for start in range(0, P, POINT_BLOCK):
        stop = min(start + POINT_BLOCK, P)
        size = stop - start
        bucket = _bucket(size)
        pad = bucket - size
        block = [np.pad(v[start:stop], (0, pad)) for v in (a, b, shift)]
        results = paired_kernel(
            x_chunks, y_chunks, w_chunks, mask_chunks, *[jnp.asarray(v) for v in block]
        )
        for output, result in zip(outputs, results):
            output.append(np.asarray(result)[:size])
    return tuple(np.concatenate(output) if output else np.zeros(0) for output in outputs)


def estimate_grid_bytes(N: int, n_sigma: int, n_tau: int) -> int:
    """Rough peak memory of grid_kernel in bytes."""
    n_padded = -(-N // CHUNK) * CHUNK
    floats = (
        4 * n_padded  # chunked x, y, mask and weights
        + CHUNK * (n_sigma + 2 * n_tau)  # moduli and rotations of one chunk
        + 6 * n_sigma * n_tau  # compensated accumulators
    )
    return 8 * floats
