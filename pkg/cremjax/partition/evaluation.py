"""Evaluation of Z_N(beta) and p_N(beta) = log|Z_N(beta)| / n on points and grids."""

import math
from typing import Optional, Tuple, Union

import jax.numpy as jnp
import numpy as np
import pandas as pd
from flax import struct

from cremjax.errors import MemoryBudgetError, PrecisionBudgetError
from cremjax.partition.kernels import (
    chunk_terms,
    estimate_grid_bytes,
    grid_kernel,
    log_largest_terms,
    run_paired_kernel,
)
from cremjax.types import ComplexParam, GridSpec, RemConfig, SampleBatch

MAX_SAFE_N = 24.0
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
# a scaled sum below this (relative to the largest term) counts as total cancellation
CANCELLATION_FLOOR = 1e-14


@struct.dataclass
class PartitionValue:
    """Z_N(beta) in log-polar form. Fields are floats, or arrays of equal shape on grids.

    cancellation_index = max(0, log of the largest term modulus - log_modulus);
    log_abs_sum = log of the sum of the term moduli.
    """

    log_modulus: Union[float, np.ndarray] = struct.field(pytree_node=False)
    phase: Union[float, np.ndarray] = struct.field(pytree_node=False)
    cancellation_index: Union[float, np.ndarray] = struct.field(pytree_node=False)
    log_abs_sum: Union[float, np.ndarray] = struct.field(pytree_node=False)

    def to_complex(self) -> Union[complex, np.ndarray]:
        log_modulus = np.asarray(self.log_modulus)
        value = np.where(
            np.isneginf(log_modulus),
            0j,
            np.exp(np.where(np.isneginf(log_modulus), 0.0, log_modulus) + 1j * np.asarray(self.phase)),
        )
        return complex(value) if value.shape == () else value

    def log_value(self) -> Union[complex, np.ndarray]:
        return np.asarray(self.log_modulus) + 1j * np.asarray(self.phase)

    def __getitem__(self, idx) -> "PartitionValue":
        return PartitionValue(
            log_modulus=float(np.asarray(self.log_modulus)[idx]),
            phase=float(np.asarray(self.phase)[idx]),
            cancellation_index=float(np.asarray(self.cancellation_index)[idx]),
            log_abs_sum=float(np.asarray(self.log_abs_sum)[idx]),
        )


@struct.dataclass
class GridEval:
    sigma_axis: np.ndarray = struct.field(pytree_node=False)
    tau_axis: np.ndarray = struct.field(pytree_node=False)
    values: PartitionValue = struct.field(pytree_node=False)
    config: RemConfig = struct.field(pytree_node=False)

    def __post_init__(self):
        shape = (len(self.sigma_axis), len(self.tau_axis))
        assert (
            np.shape(self.values.log_modulus) == shape
        ), f"Grid values of shape {np.shape(self.values.log_modulus)} do not match the axes {shape}"


def compute_bn(n: float) -> float:
    """Extreme-value centering b_N = sqrt(2n) - log(4 pi n) / (2 sqrt(2n)), so that sqrt(2 pi) b_N e^{b_N^2/2} ~ N."""
    assert n > 0, f"n must be positive, got {n}"
    root = math.sqrt(2.0 * n)
    return root - math.log(4.0 * math.pi * n) / (2.0 * root)


def make_rem_config(
    n: Optional[float] = None,
    N: Optional[int] = None,
    rho: float = 1.0,
    seed: int = 0,
    allow_large_n: bool = False,
) -> RemConfig:
    """Build a RemConfig from n or from N.

    N = round(e^n) when only n is given; n is always recomputed as log N so that n = log N holds exactly.

    Raises:
        PrecisionBudgetError: if n > 24 and allow_large_n is False
    """
    assert (n is not None) or (N is not None), "Either n or N must be given"
    if N is None:
        N = int(round(math.exp(float(n))))
    N = int(N)
    assert N >= 2, f"N must be at least 2, got {N}"
    n = math.log(N)
    if n > MAX_SAFE_N and not allow_large_n:
        raise PrecisionBudgetError(
            f"n = {n:.3f} exceeds the double-precision budget n <= {MAX_SAFE_N}; pass allow_large_n to override"
        )
    return RemConfig(n=n, N=N, rho=float(rho), seed=int(seed))


def _to_partition_values(
    shift: np.ndarray, re: np.ndarray, im: np.ndarray, abs_sum: np.ndarray
) -> PartitionValue:
    modulus = np.hypot(re, im)
    cancelled = modulus < CANCELLATION_FLOOR
    with np.errstate(divide="ignore"):
        log_modulus = np.where(cancelled, -np.inf, shift + np.log(np.where(cancelled, 1.0, modulus)))
    phase = np.where(cancelled, 0.0, np.arctan2(im, re))
    phase = np.where(phase == -np.pi, np.pi, phase)
    cancellation_index = np.where(
        cancelled, np.inf, np.maximum(0.0, shift - np.where(cancelled, 0.0, log_modulus))
    )
    log_abs_sum = shift + np.log(abs_sum)
    return PartitionValue(
        log_modulus=log_modulus,
        phase=phase,
        cancellation_index=cancellation_index,
        log_abs_sum=np.broadcast_to(log_abs_sum, log_modulus.shape).copy(),
    )


def _grid_values(batch: SampleBatch, n: float, sigma_axis: np.ndarray, tau_axis: np.ndarray):
    sqrt_n = math.sqrt(n)
    shift = log_largest_terms(batch.x, sqrt_n, sigma_axis)
    x_chunks, y_chunks, _, mask_chunks = chunk_terms(batch.x, batch.y)
    re, im, abs_sum = grid_kernel(
        x_chunks,
        y_chunks,
        mask_chunks,
        jnp.asarray(sigma_axis * sqrt_n),
        jnp.asarray(tau_axis * sqrt_n),
        jnp.asarray(shift),
    )
    return _to_partition_values(
        shift[:, None], np.asarray(re), np.asarray(im), np.asarray(abs_sum)[:, None]
    )


def eval_point(batch: SampleBatch, n: float, beta: Union[ComplexParam, complex]) -> PartitionValue:
    """Z_N(beta) = sum_k exp(sqrt(n)(sigma X_k + i tau Y_k)) in log-polar form.

    The largest term modulus is factored out and the sum is compensated. A sum that falls below
    1e-14 of the largest term is reported as total cancellation: log_modulus = -inf.
    """
    assert len(batch) >= 1, "The batch is empty"
    beta = ComplexParam.parse(beta)
    values = _grid_values(batch, n, np.array([beta.sigma]), np.array([beta.tau]))
    return values[0, 0]


def eval_grid(
    batch: SampleBatch,
    n: float,
    grid: GridSpec,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
) -> GridEval:
    """Z_N on a tensor grid, amortizing exponentials over the tau axis.

    Raises:
        MemoryBudgetError: if the estimated kernel memory exceeds the budget
    """
    grid = GridSpec.parse(grid)
    sigma_axis, tau_axis = grid.sigma_axis, grid.tau_axis
    needed = estimate_grid_bytes(len(batch), len(sigma_axis), len(tau_axis))
    if needed > memory_budget_bytes:
        raise MemoryBudgetError(
            f"Grid {grid.shape} on N={len(batch)} needs ~{needed} bytes, budget is {memory_budget_bytes}"
        )
    values = _grid_values(batch, n, sigma_axis, tau_axis)
    config = RemConfig(n=n, N=len(batch), rho=batch.rho, seed=batch.seed_path.seed)
    return GridEval(sigma_axis=sigma_axis, tau_axis=tau_axis, values=values, config=config)


def eval_points(
    batch: SampleBatch,
    n: float,
    betas: np.ndarray,
    weights: Optional[jnp.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Paired evaluation at arbitrary points.

    Args:
        batch (SampleBatch): the pairs
        n (float): the log system size
        betas (np.ndarray): complex points
        weights (Optional[jnp.ndarray]): real weights per term, e.g. sqrt(n) X_k for the derivative

    Returns:
        Tuple[np.ndarray, np.ndarray]: (shift, scaled) with sum = exp(shift) * scaled
    """
    betas = np.atleast_1d(np.asarray(betas, dtype=complex))
    sqrt_n = math.sqrt(n)
    shift = log_largest_terms(batch.x, sqrt_n, betas.real)
    chunks = chunk_terms(batch.x, batch.y, weights)
    re, im, _ = run_paired_kernel(chunks, betas.real * sqrt_n, betas.imag * sqrt_n, shift)
    return shift, re + 1j * im


def derivative_weights(batch: SampleBatch, n: float) -> jnp.ndarray:
    assert batch.rho == 1.0, "The analytic derivative in beta needs rho = 1"
    return math.sqrt(n) * batch.x


def eval_derivative(batch: SampleBatch, n: float, beta: Union[ComplexParam, complex]) -> complex:
    """Z_N'(beta) = sum_k sqrt(n) X_k exp(beta sqrt(n) X_k), rho = 1 only."""
    beta = ComplexParam.parse(beta)
    shift, scaled = eval_points(batch, n, np.array([beta.beta]), derivative_weights(batch, n))
    return complex(np.exp(shift[0]) * scaled[0])


def log_partition(batch: SampleBatch, n: float, beta: Union[ComplexParam, complex]) -> float:
    """p_N(beta) = log|Z_N(beta)| / n; -inf propagates."""
    return float(eval_point(batch, n, beta).log_modulus) / n


def grid_to_frame(grid: GridEval) -> pd.DataFrame:
    """The CSV schema of a grid: sigma, tau, log_modulus, phase, cancellation_index (sigma-major)."""
    sigma, tau = np.meshgrid(grid.sigma_axis, grid.tau_axis, indexing="ij")
    return pd.DataFrame(
        {
            "sigma": sigma.ravel(),
            "tau": tau.ravel(),
            "log_modulus": np.asarray(grid.values.log_modulus).ravel(),
            "phase": np.asarray(grid.values.phase).ravel(),
            "cancellation_index": np.asarray(grid.values.cancellation_index).ravel(),
        }
    )
