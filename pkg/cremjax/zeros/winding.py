"""Argument-principle zero counting on rectangles.

The boundary of the rectangle is parametrized by s in [0, 4), edge e = floor(s) running between
consecutive corners (counterclockwise). Samples are inserted at midpoints of every segment whose
phase increment is not below pi/2, until all increments are; the sum of the increments is then
2 pi times the number of zeros inside.
"""

import math
from typing import Tuple

import numpy as np

from cremjax.errors import BoundaryZeroError, WindingResolutionError
from cremjax.types import Rectangle
from cremjax.zeros.handles import AnalyticHandle

INITIAL_SAMPLES_PER_EDGE = 32
MAX_SAMPLES_PER_EDGE = 2**20
MAX_INCREMENT = math.pi / 2
BOUNDARY_ZERO_RATIO = 1e-12


def _boundary_points(rect: Rectangle, s: np.ndarray) -> np.ndarray:
    corners = np.array(rect.corners() + (rect.corners()[0],))
    edge = np.minimum(np.floor(s).astype(int), 3)
    frac = s - edge
    return corners[edge] + frac * (corners[edge + 1] - corners[edge])


def _check_boundary_modulus(values: np.ndarray, rect: Rectangle):
    moduli = np.abs(values)
    max_modulus = float(np.max(moduli))
    min_modulus = float(np.min(moduli))
    if not np.all(np.isfinite(moduli)):
        raise WindingResolutionError(f"Non-finite values of the handle on the boundary of {rect}")
    if max_modulus == 0 or min_modulus < BOUNDARY_ZERO_RATIO * max_modulus:
        raise BoundaryZeroError(
            f"Suspected zero on the boundary of {rect}: min |h| = {min_modulus:.3e}, max |h| = {max_modulus:.3e}",
            min_modulus=min_modulus,
            max_modulus=max_modulus,
        )


def sample_boundary(h: AnalyticHandle, rect: Rectangle) -> Tuple[np.ndarray, np.ndarray]:
    """Adaptive samples (s, h(z(s))) of the closed boundary with every phase increment below pi/2.

    Raises:
        BoundaryZeroError: if min |h| < 1e-12 max |h| on the samples
        WindingResolutionError: if an edge would need more than 2^20 samples
    """
    s = np.linspace(0.0, 4.0, 4 * INITIAL_SAMPLES_PER_EDGE, endpoint=False)
    values = h(_boundary_points(rect, s))
    while True:
        _check_boundary_modulus(values, rect)
        closed = np.append(values, values[0])
        increments = np.angle(closed[1:] * np.conj(closed[:-1]))
        bad = np.nonzero(np.abs(increments) >= MAX_INCREMENT)[0]
        if len(bad) == 0:
            return s, values
        s_next = np.append(s, 4.0)
        midpoints = 0.5 * (s_next[bad] + s_next[bad + 1])
        new_values = h(_boundary_points(rect, midpoints))
        s = np.concatenate([s, midpoints])
        values = np.concatenate([values, new_values])
        order = np.argsort(s, kind="stable")
        s, values = s[order], values[order]
        per_edge = np.bincount(np.minimum(np.floor(s).astype(int), 3), minlength=4)
        if per_edge.max() > MAX_SAMPLES_PER_EDGE:
            raise WindingResolutionError(
                f"Phase increments on {rect} are not resolved with {MAX_SAMPLES_PER_EDGE} samples per edge"
            )


def winding_from_samples(values: np.ndarray) -> float:
    closed = np.append(values, values[0])
    return float(np.sum(np.angle(closed[1:] * np.conj(closed[:-1])))) / (2 * math.pi)


def count_zeros_winding(h: AnalyticHandle, rect: Rectangle) -> int:
    """Number of zeros of h inside rect, with multiplicity, by the argument principle.

    Raises:
        BoundaryZeroError: when a zero sits on (or extremely close to) the boundary; jitter the rectangle
        WindingResolutionError: when the phase cannot be tracked within the sampling cap
    """
    _, values = sample_boundary(h, rect)
    winding = winding_from_samples(values)
    count = int(round(winding))
    assert abs(winding - count) < 1e-6, f"Winding {winding} on {rect} is not close to an integer"
    assert count >= 0, f"Negative winding {count} on {rect}: the handle is not analytic there"
    return count


def max_boundary_modulus(h: AnalyticHandle, rect: Rectangle) -> float:
    _, values = sample_boundary(h, rect)
    return float(np.max(np.abs(values)))
