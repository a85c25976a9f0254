"""Certified zero localization: winding-number subdivision plus Newton refinement.

A cell whose winding count exceeds the target is split into four children; the children counts
must add up to the parent count. A cell with a single zero is refined by Newton's method started
at its center, and the result is accepted only if it stays inside the cell with a small residual.
"""

from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from flax import struct
from joblib import Parallel, delayed

from cremjax.errors import BoundaryZeroError, MaxDepthExceededError, WindingResolutionError
from cremjax.types import Rectangle
from cremjax.zeros.handles import AnalyticHandle, Disk
from cremjax.zeros.winding import sample_boundary, winding_from_samples

SPLIT_FRACTIONS = (0.5, 0.5137, 0.4709)
JITTER = 1e-7 * (1 + 1j)
MAX_JITTER_RETRIES = 3
NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 50
RESIDUAL_TOL = 1e-8
MIN_CELL_DIAMETER = 1e-9
MAX_DEPTH = 60


@struct.dataclass
class ZeroSet:
    """Zeros found in a region, each with its multiplicity, residual and the certified cell holding it.

    residual = |h(z)| / (max of |h| on the boundary of the cell); frame describes the coordinate the
    zeros are expressed in, when it is not beta itself.
    """

    zeros: np.ndarray = struct.field(pytree_node=False)
    multiplicities: np.ndarray = struct.field(pytree_node=False)
    residuals: np.ndarray = struct.field(pytree_node=False)
    cells: Tuple[Tuple[float, float, float, float], ...] = struct.field(pytree_node=False)
    region: Optional[Union[Rectangle, Disk]] = struct.field(pytree_node=False, default=None)
    frame: Optional[dict] = struct.field(pytree_node=False, default=None)

    def __post_init__(self):
        assert (
            len(self.zeros) == len(self.multiplicities) == len(self.residuals) == len(self.cells)
        ), "ZeroSet fields must have equal lengths"

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def winding_totals(self) -> Dict[Tuple[float, float, float, float], int]:
        totals = {}
        for cell, multiplicity in zip(self.cells, self.multiplicities):
            totals[cell] = totals.get(cell, 0) + int(multiplicity)
        return totals

    @property
    def total_multiplicity(self) -> int:
        return int(np.sum(self.multiplicities))

    def filter(self, keep: np.ndarray, region=None) -> "ZeroSet":
        keep = np.asarray(keep, dtype=bool)
        return self.replace(
            zeros=self.zeros[keep],
            multiplicities=self.multiplicities[keep],
            residuals=self.residuals[keep],
            cells=tuple(c for c, k in zip(self.cells, keep) if k),
            region=self.region if region is None else region,
        )

    def mapped(self, offset: complex, scale: complex, frame: Optional[dict] = None) -> "ZeroSet":
        """The same zeros under z -> offset + scale z."""
        return self.replace(zeros=offset + scale * self.zeros, frame=frame)

    @classmethod
    def empty(cls, region=None, frame=None) -> "ZeroSet":
        return cls(
            zeros=np.zeros(0, dtype=complex),
            multiplicities=np.zeros(0, dtype=int),
            residuals=np.zeros(0),
            cells=(),
            region=region,
            frame=frame,
        )


@struct.dataclass
class _Cell:
    rect: Rectangle = struct.field(pytree_node=False)
    count: int = struct.field(pytree_node=False)
    max_modulus: float = struct.field(pytree_node=False)
    depth: int = struct.field(pytree_node=False)


def _measure(h: AnalyticHandle, rect: Rectangle, depth: int) -> _Cell:
    _, values = sample_boundary(h, rect)
    winding = winding_from_samples(values)
    count = int(round(winding))
    if abs(winding - count) > 1e-6 or count < 0:
        raise WindingResolutionError(f"Winding {winding} on {rect} is not a non-negative integer")
    return _Cell(rect=rect, count=count, max_modulus=float(np.max(np.abs(values))), depth=depth)


def newton_refine(h: AnalyticHandle, z0: complex, rect: Rectangle) -> Tuple[complex, bool]:
    """Newton iterates from z0; converged when |dz| < 1e-11 diam(rect) while staying inside rect."""
    z = complex(z0)
    tol = NEWTON_TOL * rect.diameter
    for _ in range(NEWTON_MAX_ITER):
        value = complex(h(np.array([z]))[0])
        slope = complex(h.derivative(np.array([z]))[0])
        if value == 0:
            return z, True
        if slope == 0 or not np.isfinite(slope):
            return z, False
        step = value / slope
        z = z - step
        if not bool(rect.contains(z)):
            return z, False
        if abs(step) < tol:
            return z, True
    return z, False


def _split(h: AnalyticHandle, cell: _Cell) -> List[_Cell]:
    rect = cell.rect
    last_error = None
    for fraction in SPLIT_FRACTIONS:
        sigma_mid = rect.sigma_min + fraction * rect.width
        tau_mid = rect.tau_min + fraction * rect.height
        quads = [
            Rectangle(rect.sigma_min, sigma_mid, rect.tau_min, tau_mid),
            Rectangle(sigma_mid, rect.sigma_max, rect.tau_min, tau_mid),
            Rectangle(sigma_mid, rect.sigma_max, tau_mid, rect.tau_max),
            Rectangle(rect.sigma_min, sigma_mid, tau_mid, rect.tau_max),
        ]
        try:
            children = [_measure(h, quad, cell.depth + 1) for quad in quads]
        except (BoundaryZeroError, WindingResolutionError) as e:
            last_error = e
            continue
        if sum(child.count for child in children) == cell.count:
            return children
        last_error = WindingResolutionError(
            f"Children counts {[c.count for c in children]} do not add up to {cell.count} on {rect}"
        )
    raise last_error


def _accept(h: AnalyticHandle, cell: _Cell, z: complex, multiplicity: int):
    residual = abs(complex(h(np.array([z]))[0])) / cell.max_modulus
    return (z, multiplicity, residual, cell.rect.to_tuple())


def _resolve(h: AnalyticHandle, cell: _Cell, target: int) -> list:
    if cell.count == 0:
        return []
    center = cell.rect.center
    if cell.count <= target:
        z, converged = newton_refine(h, center, cell.rect)
        if converged:
            found = _accept(h, cell, z, cell.count)
            if cell.count > 1 or found[2] < RESIDUAL_TOL:
                return [found]
    if cell.rect.diameter < MIN_CELL_DIAMETER:
        z, converged = newton_refine(h, center, cell.rect)
        return [_accept(h, cell, z if converged else center, cell.count)]
    if cell.depth >= MAX_DEPTH:
        raise MaxDepthExceededError(
            f"Cell {cell.rect} with {cell.count} zeros is unresolved at depth {cell.depth}",
            cell=cell.rect,
            count=cell.count,
        )
    found = []
    for child in _split(h, cell):
        found.extend(_resolve(h, child, target))
    return found


def _measure_root(h: AnalyticHandle, rect: Rectangle) -> _Cell:
    for k in range(MAX_JITTER_RETRIES + 1):
        try:
            return _measure(h, rect.shifted(k * JITTER), 0)
        except BoundaryZeroError:
            if k == MAX_JITTER_RETRIES:
                raise
            print(f"[Zeros] Boundary zero suspected on {rect}, jittering by {(k + 1) * JITTER}")


def locate_zeros(
    h: AnalyticHandle,
    rect: Rectangle,
    target_cell_zeros: int = 1,
    n_jobs: int = 1,
) -> ZeroSet:
    """All zeros of h in rect.

    Cells are subdivided until their winding count is at most target_cell_zeros. Cells with one
    zero are refined by Newton's method; cells with several zeros (when the target allows it, or once
    they are smaller than 1e-9) are reported as one zero with that multiplicity. The total
    multiplicity always equals the winding count of the (possibly jittered) rectangle.

    Raises:
        BoundaryZeroError: if the rectangle keeps a boundary zero after 3 jitters
        MaxDepthExceededError: if a cell is still unresolved after 60 subdivisions
    """
    assert target_cell_zeros >= 1, f"target_cell_zeros must be at least 1, got {target_cell_zeros}"
    root = _measure_root(h, Rectangle.parse(rect))
    if root.count == 0:
        return ZeroSet.empty(region=root.rect)
    if n_jobs == 1 or root.count <= target_cell_zeros:
        found = _resolve(h, root, target_cell_zeros)
    else:
        children = _split(h, root)
        parts = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_resolve)(h, child, target_cell_zeros) for child in children
        )
        found = [item for part in parts for item in part]
    zs = ZeroSet(
        zeros=np.array([f[0] for f in found], dtype=complex),
        multiplicities=np.array([f[1] for f in found], dtype=int),
        residuals=np.array([f[2] for f in found], dtype=float),
        cells=tuple(f[3] for f in found),
        region=root.rect,
    )
    assert (
        zs.total_multiplicity == root.count
    ), f"Located {zs.total_multiplicity} zeros but the winding count of {root.rect} is {root.count}"
    return zs


def zeros_in_disk(
    h: AnalyticHandle,
    center: complex,
    radius: float,
    n_jobs: int = 1,
) -> ZeroSet:
    """Zeros in the closed disk: a search on the bounding square, then a distance filter."""
    disk = Disk(center=complex(center), radius=float(radius))
    if radius <= 0:
        return ZeroSet.empty(region=disk)
    zs = locate_zeros(h, disk.bounding_square(), n_jobs=n_jobs)
    return zs.filter(np.abs(zs.zeros - disk.center) <= disk.radius, region=disk)


def zero_set_to_frame(zs: ZeroSet) -> pd.DataFrame:
    """CSV schema of a zero set: re, im, multiplicity, residual."""
    return pd.DataFrame(
        {
            "re": np.real(zs.zeros),
            "im": np.imag(zs.zeros),
            "multiplicity": zs.multiplicities,
            "residual": zs.residuals,
        }
    )
