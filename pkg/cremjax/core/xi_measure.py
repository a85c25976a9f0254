"""The limiting zero measure Xi and its pairing with test functions.

Xi = 2 * (Lebesgue measure on B3)
   + (arc length on the two arcs of the unit circle with |sigma| < 1/sqrt(2))
   + (density sqrt(2)|tau| times arc length on the four segments |sigma| + |tau| = sqrt(2), |sigma| > 1/sqrt(2))

Xi is the distributional Laplacian of p, so the expected number of zeros of Z_N in a
region D behaves like n * Xi(D) / (2 pi).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from cremjax.core.phases import SQRT2, SQRT_HALF, limit_p_grid
from cremjax.errors import MeshTooCoarseError, QuadratureError, SupportError
from cremjax.types import GridSpec, Rectangle


@dataclass(frozen=True)
class XiMeasure:
    """Descriptor of the three components of Xi."""

    area_weight: float = 2.0
    # angular ranges of the arcs on the unit circle
    arcs: Tuple[Tuple[float, float], ...] = (
        (math.pi / 4, 3 * math.pi / 4),
        (5 * math.pi / 4, 7 * math.pi / 4),
    )
    # (sigma sign, tau sign) of the four segments, parametrized by |sigma| in [1/sqrt(2), sqrt(2)]
    segments: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

    @staticmethod
    def segment_density(beta: complex) -> float:
        """Density of the segment component w.r.t. arc length."""
        return SQRT2 * abs(complex(beta).imag)

    @staticmethod
    def segment_point(abs_sigma: float, signs: Tuple[int, int]) -> complex:
        return complex(signs[0] * abs_sigma, signs[1] * (SQRT2 - abs_sigma))

    def total_arc_length(self) -> float:
        return sum(b - a for a, b in self.arcs)

    def segment_mass(self) -> float:
        """Xi-mass of one segment: integral of 2 (sqrt(2) - s) ds over [1/sqrt(2), sqrt(2)]."""
        return (SQRT2 - SQRT_HALF) ** 2


XI = XiMeasure()


@dataclass(frozen=True)
class CompactField:
    """A scalar test function on the plane with a declared compact support.

    `func` takes a numpy array of complex points and returns real values of the same shape;
    it must vanish outside `support`.
    """

    func: Callable[[np.ndarray], np.ndarray]
    support: Rectangle
    name: str = "field"

    def __call__(self, z) -> np.ndarray:
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=float)

    def __add__(self, other: "CompactField") -> "CompactField":
        support = Rectangle(
            min(self.support.sigma_min, other.support.sigma_min),
            max(self.support.sigma_max, other.support.sigma_max),
            min(self.support.tau_min, other.support.tau_min),
            max(self.support.tau_max, other.support.tau_max),
        )
        return CompactField(
            lambda z: self(z) + other(z), support, f"{self.name}+{other.name}"
        )

    def scaled(self, factor: float) -> "CompactField":
        return CompactField(lambda z: factor * self(z), self.support, f"{factor}*{self.name}")


def bump_field(center: complex, radius: float, amplitude: float = 1.0) -> CompactField:
    """The C-infinity bump amplitude * exp(1 - 1 / (1 - |z - c|^2 / r^2)) on the disk |z - c| < r."""
    center = complex(center)
    assert radius > 0, f"radius must be positive, got {radius}"

    def func(z: np.ndarray) -> np.ndarray:
        u = np.abs(z - center) ** 2 / radius**2
        inside = u < 1.0
        safe = np.where(inside, u, 0.0)
        return np.where(inside, amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)

    return CompactField(
        func, Rectangle.around(center, radius), f"bump({center}, {radius})"
    )


def indicator_field(rect: Rectangle) -> CompactField:
    """The (discontinuous) indicator of a closed rectangle, used for zero counts."""

    def func(z: np.ndarray) -> np.ndarray:
        return rect.contains(z).astype(float)

    return CompactField(func, rect, f"indicator{rect.to_tuple()}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances of the adaptive line quadrature and resolution of the area rule."""

    epsabs: float = 1e-12
    epsrel: float = 1e-10
    limit: int = 200
    area_nodes: int = 256
    # angular / parametric resolution used to find where a line meets the support
    support_scan: int = 4097


@dataclass
class XiIntegral:
    value: float
    abs_error: float
    components: Dict[str, float] = field(default_factory=dict)

    def __iter__(self):
        yield self.value
        yield self.abs_error


def _quad(func: Callable[[float], float], a: float, b: float, quad: QuadratureSpec) -> Tuple[float, float]:
    result = integrate.quad(
        func, a, b, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit, full_output=1
    )
    if len(result) > 3:
        raise QuadratureError(
            f"Adaptive quadrature did not converge on [{a}, {b}]: {result[3]}"
        )
    return result[0], result[1]


def _support_runs(
    params: np.ndarray, inside: np.ndarray
) -> List[Tuple[float, float]]:
    """Contiguous parameter runs where `inside` holds, padded by one scan step."""
    runs = []
    if not inside.any():
        return runs
    step = params[1] - params[0]
    idx = np.flatnonzero(inside)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    for i0, i1 in zip(starts, ends):
        runs.append(
            (max(params[0], params[i0] - step), min(params[-1], params[i1] + step))
        )
    return runs


def _line_integral(
    f: CompactField,
    curve: Callable[[np.ndarray], np.ndarray],
    weight: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadratureSpec,
) -> Tuple[float, float]:
    """Integral over [a, b] of weight(t) f(curve(t)) dt, restricted to where the curve meets the support."""
    params = np.linspace(a, b, quad.support_scan)
    inside = f.support.contains(curve(params), margin=1e-12)
    value, error = 0.0, 0.0
    for lo, hi in _support_runs(params, inside):

        def integrand(t: float) -> float:
            t_arr = np.array([t])
            return float(weight(t_arr)[0] * f(curve(t_arr))[0])

        v, e = _quad(integrand, lo, hi, quad)
        value += v
        error += e
    return value, error


def _midpoint_area_B3(f: CompactField, m: int) -> float:
    """Mapped tensor midpoint rule for the integral of f over B3 intersected with the support."""
    rect = f.support
    s_lo, s_hi = max(rect.sigma_min, -SQRT_HALF), min(rect.sigma_max, SQRT_HALF)
    if s_lo >= s_hi:
        return 0.0
    u = (np.arange(m) + 0.5) / m
    sigma = s_lo + (s_hi - s_lo) * u
    c = np.sqrt(1.0 - sigma**2)
    total = 0.0
    # upper piece tau > c(sigma) and lower piece tau < -c(sigma)
    for lo, hi in (
        (np.maximum(c, rect.tau_min), np.full(m, rect.tau_max)),
        (np.full(m, rect.tau_min), np.minimum(-c, rect.tau_max)),
    ):
        length = np.clip(hi - lo, 0.0, None)
        tau = lo[:, None] + length[:, None] * u[None, :]
        values = f(sigma[:, None] + 1j * tau)
        total += float(np.sum(values.mean(axis=1) * length))
    return total * (s_hi - s_lo) / m


def xi_integrate(f: CompactField, quad: Optional[QuadratureSpec] = None) -> XiIntegral:
    """Pair a compactly supported test function with Xi.

    Args:
        f (CompactField): the test function and its support
        quad (QuadratureSpec, optional): quadrature tolerances. Defaults to QuadratureSpec().

    Returns:
        XiIntegral: value, absolute error estimate and the three components (area, arcs, segments)

    Raises:
        QuadratureError: if the adaptive line quadrature does not converge
    """
    quad = QuadratureSpec() if quad is None else quad

    # area component, midpoint rule refined once and Richardson-extrapolated
    coarse = _midpoint_area_B3(f, quad.area_nodes)
    fine = _midpoint_area_B3(f, 2 * quad.area_nodes)
    area = XI.area_weight * (4.0 * fine - coarse) / 3.0
    area_error = XI.area_weight * abs(fine - coarse) / 3.0

    arcs, arcs_error = 0.0, 0.0
    for theta_0, theta_1 in XI.arcs:
        v, e = _line_integral(
            f, lambda t: np.exp(1j * t), np.ones_like, theta_0, theta_1, quad
        )
        arcs += v
        arcs_error += e

    segments, segments_error = 0.0, 0.0
    for signs in XI.segments:
        # ds = sqrt(2) d|sigma| and density sqrt(2)|tau| = sqrt(2)(sqrt(2) - |sigma|)
        v, e = _line_integral(
            f,
            lambda s, signs=signs: signs[0] * s + 1j * signs[1] * (SQRT2 - s),
            lambda s: 2.0 * (SQRT2 - s),
            SQRT_HALF,
            SQRT2,
            quad,
        )
        segments += v
        segments_error += e

    return XiIntegral(
        value=area + arcs + segments,
        abs_error=area_error + arcs_error + segments_error,
        components={"area": area, "arcs": arcs, "segments": segments},
    )


def laplacian_consistency(
    grid: GridSpec, f: CompactField, quad: Optional[QuadratureSpec] = None
) -> Tuple[float, float]:
    """Compare the discrete pairing of p with the Laplacian of f against xi_integrate(f).

    lhs = sum over grid nodes of p * (5-point Laplacian of f) * cell area, rhs = xi_integrate(f).

    Raises:
        SupportError: if the grid does not cover the support of f
        MeshTooCoarseError: if the step exceeds the support diameter / 16
    """
    grid = GridSpec.parse(grid)
    if not grid.covers(f.support):
        raise SupportError(f"Grid {grid} does not cover the support {f.support} of {f.name}")
    if grid.step > f.support.diameter / 16:
        raise MeshTooCoarseError(
            f"Mesh {grid.step} is coarser than support diameter / 16 = {f.support.diameter / 16}"
        )
    sigma_axis, tau_axis = grid.sigma_axis, grid.tau_axis
    h_sigma = sigma_axis[1] - sigma_axis[0]
    h_tau = tau_axis[1] - tau_axis[0]
    values = f(sigma_axis[:, None] + 1j * tau_axis[None, :])
    padded = np.pad(values, 1)
    laplacian = (padded[2:, 1:-1] - 2 * values + padded[:-2, 1:-1]) / h_sigma**2 + (
        padded[1:-1, 2:] - 2 * values + padded[1:-1, :-2]
    ) / h_tau**2
    p = limit_p_grid(sigma_axis, tau_axis)
    lhs = float(np.sum(p * laplacian) * h_sigma * h_tau)
    rhs = xi_integrate(f, quad).value
    return lhs, rhs


def expected_zero_count(f: CompactField, n: float, quad: Optional[QuadratureSpec] = None) -> float:
    """Limiting expected weighted zero count n * Xi(f) / (2 pi)."""
    return n * xi_integrate(f, quad).value / (2 * math.pi)
