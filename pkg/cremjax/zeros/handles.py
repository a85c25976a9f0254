"""Analytic-function handles consumed by the zero finder."""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from cremjax.types import Rectangle


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def contains(self, z, margin: float = 0.0):
        return np.abs(np.asarray(z) - self.center) <= self.radius + margin

    def bounding_square(self) -> Rectangle:
        return Rectangle.around(complex(self.center), self.radius)


Domain = Union[Rectangle, Disk]


@dataclass(frozen=True)
class AnalyticHandle:
    """A vectorized analytic function with an optional analytic derivative.

    eval and deriv take and return numpy arrays of complex numbers. Without deriv, derivatives
    come from Richardson-extrapolated central differences.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain: Optional[Domain] = None
    name: str = "h"

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.eval(z), dtype=complex)

    def derivative(self, z, step: Optional[float] = None) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.deriv is not None:
            return np.asarray(self.deriv(z), dtype=complex)
        h = step if step is not None else 1e-3 * self._scale()
        # (4 D(h/2) - D(h)) / 3 cancels the h^2 error term of the central difference
        coarse = (self(z + h) - self(z - h)) / (2 * h)
        fine = (self(z + h / 2) - self(z - h / 2)) / h
        return (4 * fine - coarse) / 3

    def in_domain(self, z, margin: float = 0.0):
        if self.domain is None:
            return np.ones(np.shape(z), dtype=bool)
        return self.domain.contains(z, margin)

    def _scale(self) -> float:
        if isinstance(self.domain, Disk):
            return max(self.domain.radius, 1e-3)
        if isinstance(self.domain, Rectangle):
            return max(self.domain.diameter, 1e-3)
        return 1.0


def polynomial_handle(roots, leading: complex = 1.0) -> AnalyticHandle:
    """leading * prod (z - r), with its exact derivative, mostly for tests and sanity checks."""
    roots = np.asarray(roots, dtype=complex)
    coefficients = leading * np.poly(roots)
    derivative = np.polyder(coefficients)
    return AnalyticHandle(
        eval=lambda z: np.polyval(coefficients, z),
        deriv=lambda z: np.polyval(derivative, z),
        name=f"poly(deg={len(roots)})",
    )


def function_handle(func: Callable, deriv: Optional[Callable] = None, name: str = "h") -> AnalyticHandle:
    return AnalyticHandle(eval=func, deriv=deriv, name=name)


def bounded_disk(center: complex, radius: float) -> Disk:
    assert radius >= 0 and math.isfinite(radius), f"Invalid radius {radius}"
    return Disk(center=complex(center), radius=float(radius))
