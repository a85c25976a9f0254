"""The standard normal CDF Phi continued to the complex plane.

Phi(z) = 1/2 * exp(-z^2/2) * w(-i z / sqrt(2)), with w the Faddeeva (scaled complementary
error) function. The Faddeeva function is only evaluated in the closed upper half plane,
i.e. for Re z <= 0; the right half plane goes through the reflection Phi(z) = 1 - Phi(-z).
Beyond |z| = 26 the sector asymptotics of the Gaussian tail take over, carried in log space.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import wofz

from cremjax.types import wrap_log

LOG_HALF = math.log(0.5)
LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
SQRT2 = math.sqrt(2.0)

SERIES_RADIUS = 3.0
ASYMPTOTIC_RADIUS = 26.0
SECTOR_EPSILON = 0.1
# exp() of a real part above this overflows doubles
_LOG_OVERFLOW = 700.0


class PhiBranch(str, Enum):
    series = "series"
    continued_fraction = "continued_fraction"
    asymptotic_lower = "asymptotic_lower"
    asymptotic_upper = "asymptotic_upper"


@dataclass(frozen=True)
class PhiResult:
    value: complex
    log_value: complex
    branch_used: PhiBranch


def _check_finite(z: complex):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"Phi is only defined here for finite arguments, got {z}")


def _safe_exp(log_value: complex) -> complex:
    if log_value.real > _LOG_OVERFLOW:
        return complex(
            math.inf * math.cos(log_value.imag) if math.cos(log_value.imag) != 0 else 0.0,
            math.inf * math.sin(log_value.imag) if math.sin(log_value.imag) != 0 else 0.0,
        )
    if log_value.real == -math.inf:
        return 0j
    return cmath.exp(log_value)


def log_one_minus_exp(log_u: complex) -> complex:
    """log(1 - e^{log_u}) on the principal branch, stable when e^{log_u} is large or tiny."""
    if log_u.real == -math.inf:
        return 0j
    if log_u.real > 0:
        # 1 - u = -u (1 - 1/u)
        return wrap_log(log_u + 1j * math.pi + np.log1p(-cmath.exp(-log_u)))
    u = cmath.exp(log_u)
    if abs(u) < 1e-4:
        return complex(np.log1p(-u))
    return wrap_log(cmath.log(1.0 - u))


def _log_phi_left(z: complex) -> complex:
    """log Phi(z) for Re z <= 0, where the Faddeeva argument lies in the upper half plane."""
    w = complex(wofz(-1j * z / SQRT2))
    return LOG_HALF - z * z / 2.0 + cmath.log(w)


def _asymptotic_series(z: complex) -> complex:
    """S(z) = sum_k (-1)^k (2k-1)!! / z^(2k), truncated at its smallest term."""
    inv_z2 = 1.0 / (z * z)
    total = term = 1.0 + 0j
    k = 1
    while True:
        next_term = -term * (2 * k - 1) * inv_z2
        if abs(next_term) >= abs(term) or abs(next_term) < 1e-17 * abs(total):
            break
        total += next_term
        term = next_term
        k += 1
    return total


def _log_tail_term(z: complex) -> complex:
    """log(phi(z) S(z) / z), phi the standard normal density."""
    return -z * z / 2.0 - LOG_SQRT_2PI + cmath.log(_asymptotic_series(z)) - cmath.log(z)


def phi_complex(z: Union[complex, float]) -> PhiResult:
    """Phi(z) and its principal-branch logarithm.

    Args:
        z (Union[complex, float]): a finite complex argument

    Returns:
        PhiResult: value, log_value and the branch that produced them. The value may
            overflow to inf or underflow to 0 for large |z|; log_value stays finite.
    """
    z = complex(z)
    _check_finite(z)
    radius = abs(z)

    if radius > ASYMPTOTIC_RADIUS:
        if abs(cmath.phase(z)) <= 3 * math.pi / 4 - SECTOR_EPSILON:
            # Phi(z) ~ 1 - phi(z) S(z) / z
            log_value = log_one_minus_exp(_log_tail_term(z))
            branch = PhiBranch.asymptotic_upper
        else:
            # Phi(z) ~ -phi(z) S(z) / z
            log_value = wrap_log(_log_tail_term(z) + 1j * math.pi)
            branch = PhiBranch.asymptotic_lower
        return PhiResult(_safe_exp(log_value), log_value, branch)

    branch = PhiBranch.series if radius <= SERIES_RADIUS else PhiBranch.continued_fraction
    if z.real <= 0:
        log_value = wrap_log(_log_phi_left(z))
        return PhiResult(_safe_exp(log_value), log_value, branch)

    log_reflected = _log_phi_left(-z)
    if log_reflected.real < _LOG_OVERFLOW:
        value = 1.0 - cmath.exp(log_reflected)
        log_value = wrap_log(cmath.log(value)) if value != 0 else complex(-math.inf, 0.0)
        return PhiResult(value, log_value, branch)
    log_value = log_one_minus_exp(log_reflected)
    return PhiResult(_safe_exp(log_value), log_value, branch)


def log_phi_complex(z: Union[complex, float]) -> complex:
    """Principal-branch log Phi(z)."""
    return phi_complex(z).log_value


def phi_real(x: float) -> float:
    """Phi on the real axis."""
    return phi_complex(float(x)).value.real
