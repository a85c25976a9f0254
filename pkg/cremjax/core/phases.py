"""The limiting phase diagram of the complex REM and its log-partition function p(beta).

The plane splits into three open regions

    B1 = {2 sigma^2 < 1, sigma^2 + tau^2 < 1}  U  {2 sigma^2 > 1, |sigma| + |tau| < sqrt(2)}
    B2 = {2 sigma^2 > 1, |sigma| + |tau| > sqrt(2)}
    B3 = {2 sigma^2 < 1, sigma^2 + tau^2 > 1}

and the boundary pieces between them.
"""

import math
from typing import Dict, Union

import numpy as np

from cremjax.types import ComplexParam, PhaseLabel

SQRT2 = math.sqrt(2.0)
SQRT_HALF = math.sqrt(0.5)
BOUNDARY_AGREEMENT_TOL = 1e-12

# Comparisons against an irrational boundary constant are resolved at the
# resolution of the double inputs: values within this many ulps are equal.
_ULPS = 4.0
_EPS = np.finfo(float).eps


def compare_at_resolution(a: float, b: float) -> int:
    """Sign of a - b, with 0 whenever a and b agree to a few ulps."""
    if abs(a - b) <= _ULPS * _EPS * max(abs(a), abs(b)):
        return 0
    return -1 if a < b else 1


def classify(beta: Union[ComplexParam, complex]) -> PhaseLabel:
    """Assign a point of the plane to its open phase or boundary piece.

    Args:
        beta (Union[ComplexParam, complex]): the inverse temperature

    Returns:
        PhaseLabel: one of B1, B2, B3, Boundary12, Boundary13, Boundary23, TriplePoint
    """
    beta = ComplexParam.parse(beta)
    sigma, tau = abs(beta.sigma), abs(beta.tau)
    side_sigma = compare_at_resolution(sigma, SQRT_HALF)

    if side_sigma < 0:
        side_circle = compare_at_resolution(sigma * sigma + tau * tau, 1.0)
        if side_circle < 0:
            return PhaseLabel.B1
        if side_circle > 0:
            return PhaseLabel.B3
        return PhaseLabel.Boundary13

    if side_sigma > 0:
        side_line = compare_at_resolution(sigma + tau, SQRT2)
        if side_line < 0:
            return PhaseLabel.B1
        if side_line > 0:
            return PhaseLabel.B2
        return PhaseLabel.Boundary12

    # on the vertical lines |sigma| = 1/sqrt(2), which meet both curves at tau = 1/sqrt(2)
    side_tau = compare_at_resolution(tau, SQRT_HALF)
    if side_tau < 0:
        return PhaseLabel.B1
    if side_tau > 0:
        return PhaseLabel.Boundary23
    return PhaseLabel.TriplePoint


def _p_B1(sigma: float, tau: float) -> float:
    return 1.0 + 0.5 * (sigma * sigma - tau * tau)


def _p_B2(sigma: float, tau: float) -> float:
    return SQRT2 * abs(sigma)


def _p_B3(sigma: float, tau: float) -> float:
    return 0.5 + sigma * sigma


_label_to_closure_regions = {
    PhaseLabel.B1: ("B1",),
    PhaseLabel.B2: ("B2",),
    PhaseLabel.B3: ("B3",),
    PhaseLabel.Boundary12: ("B1", "B2"),
    PhaseLabel.Boundary13: ("B1", "B3"),
    PhaseLabel.Boundary23: ("B2", "B3"),
    PhaseLabel.TriplePoint: ("B1", "B2", "B3"),
}

_region_to_formula = {"B1": _p_B1, "B2": _p_B2, "B3": _p_B3}


def region_formulas(beta: Union[ComplexParam, complex]) -> Dict[str, float]:
    """Values of every closure formula of p that applies at beta.

    Open regions get one entry, boundary pieces two, the triple point three.
    """
    beta = ComplexParam.parse(beta)
    label = classify(beta)
    return {
        region: _region_to_formula[region](beta.sigma, beta.tau)
        for region in _label_to_closure_regions[label]
    }


def limit_p(beta: Union[ComplexParam, complex]) -> float:
    """The limiting log-partition function p(beta) = lim (1/n) log |Z_N(beta)|.

    On boundaries all adjacent closure formulas are evaluated and must agree.
    """
    values = region_formulas(beta)
    reference = next(iter(values.values()))
    for region, value in values.items():
        assert abs(value - reference) <= BOUNDARY_AGREEMENT_TOL * max(1.0, abs(reference)), (
            f"Closure formulas of p disagree at {beta}: {values}"
        )
    return float(reference)


def limit_p_grid(sigma_axis: np.ndarray, tau_axis: np.ndarray) -> np.ndarray:
    """Vectorized p on a tensor grid, shape (len(sigma_axis), len(tau_axis)).

    Boundary nodes take any adjacent formula, they coincide by continuity.
    """
    s = np.abs(np.asarray(sigma_axis, dtype=float))[:, None]
    t = np.abs(np.asarray(tau_axis, dtype=float))[None, :]
    in_B3 = (s <= SQRT_HALF) & (s * s + t * t > 1.0)
    in_B2 = (s > SQRT_HALF) & (s + t > SQRT2)
    return np.where(in_B3, _p_B3(s, t), np.where(in_B2, _p_B2(s, t), _p_B1(s, t)))
