import cmath
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Tuple, Union

import jax.numpy as jnp
import numpy as np
from flax import struct


@struct.dataclass
class ComplexParam:
    """An inverse-temperature point beta = sigma + i*tau.

    The pair (sigma, tau) and the complex number beta are interchangeable views.
    """

    sigma: float = struct.field(pytree_node=False)
    tau: float = struct.field(pytree_node=False)

    def __post_init__(self):
        assert math.isfinite(self.sigma) and math.isfinite(
            self.tau
        ), f"ComplexParam components must be finite, got ({self.sigma}, {self.tau})"

    @property
    def beta(self) -> complex:
        return complex(self.sigma, self.tau)

    def conjugate(self) -> "ComplexParam":
        return ComplexParam(sigma=self.sigma, tau=-self.tau)

    def __neg__(self) -> "ComplexParam":
        return ComplexParam(sigma=-self.sigma, tau=-self.tau)

    @classmethod
    def from_complex(cls, beta: Union[complex, float]) -> "ComplexParam":
        beta = complex(beta)
        return cls(sigma=float(beta.real), tau=float(beta.imag))

    @classmethod
    def parse(cls, text: Union[str, complex, float, "ComplexParam"]) -> "ComplexParam":
        """Parse "a+bi", "a-bi", "bi", "a" or "a,b" into a ComplexParam."""
        if isinstance(text, ComplexParam):
            return text
        if isinstance(text, (int, float, complex)):
            return cls.from_complex(text)
        text = str(text).strip().replace(" ", "")
        if "," in text:
            sigma, tau = text.strip("()[]").split(",")
            return cls(sigma=float(sigma), tau=float(tau))
        try:
            return cls.from_complex(complex(text.replace("i", "j")))
        except ValueError:
            raise ValueError(f"Cannot parse a complex parameter from {text!r}")

    def __repr__(self) -> str:
        return f"ComplexParam({self.sigma!r}{self.tau:+}i)"


class PhaseLabel(str, Enum):
    """Open phases and the boundary pieces of the limiting phase diagram."""

    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    Boundary12 = "Boundary12"
    Boundary13 = "Boundary13"
    Boundary23 = "Boundary23"
    TriplePoint = "TriplePoint"


@struct.dataclass
class RemConfig:
    """Parameters of one complex REM: size, energy/phase correlation and seed."""

    n: float = struct.field(pytree_node=False)
    N: int = struct.field(pytree_node=False)
    rho: float = struct.field(pytree_node=False)
    seed: int = struct.field(pytree_node=False)

    def __post_init__(self):
        assert abs(self.rho) <= 1.0, f"rho must lie in [-1, 1], got {self.rho}"
        assert self.N >= 1, f"N must be at least 1, got {self.N}"
        assert self.n > 0, f"n must be positive, got {self.n}"


class Purpose(IntEnum):
    """Purpose codes folded into the PRNG key, one stream per use."""

    PAIRS = 0
    ARRIVALS = 1
    STABLE = 2
    GAF = 3
    ZETA = 4
    ZETA_MIRROR = 5
    TAIL = 6
    GAUSSIAN = 7


@struct.dataclass
class SeedPath:
    """Address of an independent random stream: (seed, replica, purpose)."""

    seed: int = struct.field(pytree_node=False)
    replica: int = struct.field(pytree_node=False, default=0)
    purpose: int = struct.field(pytree_node=False, default=int(Purpose.PAIRS))

    def with_purpose(self, purpose: Union[int, Purpose]) -> "SeedPath":
        return self.replace(purpose=int(purpose))

    def with_replica(self, replica: int) -> "SeedPath":
        return self.replace(replica=int(replica))

    def to_tuple(self) -> Tuple[int, int, int]:
        return (self.seed, self.replica, self.purpose)


@struct.dataclass
class SampleBatch:
    """The i.i.d. pairs (X_k, Y_k) backing one realization of Z_N."""

    x: jnp.ndarray
    y: jnp.ndarray
    rho: float = struct.field(pytree_node=False)
    seed_path: SeedPath = struct.field(pytree_node=False)

    def __post_init__(self):
        assert (
            self.x.shape == self.y.shape
        ), f"x and y must have the same shape, got {self.x.shape} and {self.y.shape}"

    def __len__(self) -> int:
        return int(self.x.shape[0])


@struct.dataclass
class PoissonArrivals:
    """Arrival times of a unit-intensity Poisson process on [0, horizon]."""

    p: np.ndarray = struct.field(pytree_node=False)
    horizon: float = struct.field(pytree_node=False)

    def __len__(self) -> int:
        return int(self.p.shape[0])


@dataclass(frozen=True)
class Rectangle:
    """Closed axis-aligned rectangle [sigma_min, sigma_max] x [tau_min, tau_max]."""

    sigma_min: float
    sigma_max: float
    tau_min: float
    tau_max: float

    def __post_init__(self):
        assert (
            self.sigma_min < self.sigma_max and self.tau_min < self.tau_max
        ), f"Degenerate rectangle {self}"

    @classmethod
    def around(cls, center: complex, half_width: float, half_height: float = None) -> "Rectangle":
        half_height = half_width if half_height is None else half_height
        return cls(
            center.real - half_width,
            center.real + half_width,
            center.imag - half_height,
            center.imag + half_height,
        )

    @property
    def width(self) -> float:
        return self.sigma_max - self.sigma_min

    @property
    def height(self) -> float:
        return self.tau_max - self.tau_min

    @property
    def center(self) -> complex:
        return complex(
            0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.tau_min + self.tau_max)
        )

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> Tuple[complex, complex, complex, complex]:
        """Corners in counterclockwise order, starting bottom-left."""
        return (
            complex(self.sigma_min, self.tau_min),
            complex(self.sigma_max, self.tau_min),
            complex(self.sigma_max, self.tau_max),
            complex(self.sigma_min, self.tau_max),
        )

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z)
        return (
            (z.real >= self.sigma_min - margin)
            & (z.real <= self.sigma_max + margin)
            & (z.imag >= self.tau_min - margin)
            & (z.imag <= self.tau_max + margin)
        )

    def contains_rectangle(self, other: "Rectangle") -> bool:
        return (
            other.sigma_min >= self.sigma_min
            and other.sigma_max <= self.sigma_max
            and other.tau_min >= self.tau_min
            and other.tau_max <= self.tau_max
        )

    def shifted(self, offset: complex) -> "Rectangle":
        return Rectangle(
            self.sigma_min + offset.real,
            self.sigma_max + offset.real,
            self.tau_min + offset.imag,
            self.tau_max + offset.imag,
        )

    def mirrored_sigma(self) -> "Rectangle":
        """The image under beta -> -conj(beta), i.e. sigma -> -sigma."""
        return Rectangle(-self.sigma_max, -self.sigma_min, self.tau_min, self.tau_max)

    def to_tuple(self) -> Tuple[float, float, float, float]:
        return (self.sigma_min, self.sigma_max, self.tau_min, self.tau_max)

    @classmethod
    def parse(cls, window) -> "Rectangle":
        """Accept "s0:s1:t0:t1", a 4-sequence or a Rectangle."""
        if isinstance(window, Rectangle):
            return window
        if isinstance(window, str):
            window = [float(v) for v in window.split(":")]
        assert len(window) == 4, f"A window needs four numbers, got {window}"
        return cls(*[float(v) for v in window])


def principal_angle(phase):
    """Wrap angles into (-pi, pi]."""
    wrapped = np.mod(np.asarray(phase) + np.pi, 2 * np.pi) - np.pi
    return np.where(wrapped == -np.pi, np.pi, wrapped)


def wrap_log(log_value: complex) -> complex:
    """Principal branch representative of a complex logarithm."""
    return complex(log_value.real, float(principal_angle(log_value.imag)))


def log_to_complex(log_value) -> complex:
    """exp of a complex log, with -inf real part mapped to exact zero."""
    if np.isneginf(np.real(log_value)):
        return 0j
    return cmath.exp(log_value)


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid on [sigma_min, sigma_max] x [tau_min, tau_max].

    Each axis holds round((max - min) / step) + 1 equally spaced nodes, endpoints included.
    """

    sigma_min: float
    sigma_max: float
    tau_min: float
    tau_max: float
    step: float

    def __post_init__(self):
        if not (self.sigma_min <= self.sigma_max and self.tau_min <= self.tau_max):
            raise ValueError(f"Empty grid {self}")
        if not self.step > 0:
            raise ValueError(f"Grid step must be positive, got {self.step}")

    @staticmethod
    def _axis(low: float, high: float, step: float) -> np.ndarray:
        n_nodes = int(round((high - low) / step)) + 1
        if n_nodes == 1:
            return np.array([float(low)])
        return np.linspace(low, high, n_nodes)

    @property
    def sigma_axis(self) -> np.ndarray:
        return self._axis(self.sigma_min, self.sigma_max, self.step)

    @property
    def tau_axis(self) -> np.ndarray:
        return self._axis(self.tau_min, self.tau_max, self.step)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.sigma_axis), len(self.tau_axis))

    def covers(self, rect: "Rectangle") -> bool:
        return (
            self.sigma_min <= rect.sigma_min
            and self.sigma_max >= rect.sigma_max
            and self.tau_min <= rect.tau_min
            and self.tau_max >= rect.tau_max
        )

    @classmethod
    def parse(cls, grid) -> "GridSpec":
        """Accept a GridSpec, a mapping with the five fields, or "s0:s1:t0:t1:step"."""
        if isinstance(grid, GridSpec):
            return grid
        if isinstance(grid, str):
            values = [float(v) for v in grid.split(":")]
            assert len(values) == 5, f"A grid needs five numbers, got {grid}"
            return cls(*values)
        return cls(
            sigma_min=float(grid["sigma_min"]),
            sigma_max=float(grid["sigma_max"]),
            tau_min=float(grid["tau_min"]),
            tau_max=float(grid["tau_max"]),
            step=float(grid["step"]),
        )
