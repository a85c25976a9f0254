"""Truncated exponential moments of Gaussian variables and their saddle-point regimes.

For X standard normal, E[e^{wX} 1_{X<a}] = e^{w^2/2} Phi(a - w) for every complex w.
All formulas have a log-space twin; e^{w^2 n / 2} overflows doubles already for moderate n.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple, Union

from cremjax.errors import SaddleRegimeError
from cremjax.specfun.phi import log_phi_complex
from cremjax.types import wrap_log


class _PlusInfinity:
    """The truncation level a = +infinity, i.e. no truncation at all."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PLUS_INFINITY"

    def __reduce__(self):
        return (_PlusInfinity, ())


PLUS_INFINITY = _PlusInfinity()
EXTRAPOLATION_RTOL = 1e-9

Level = Union[float, _PlusInfinity]


def _check_level(a: Level) -> Level:
    if a is PLUS_INFINITY:
        return a
    a = float(a)
    if not math.isfinite(a):
        raise ValueError(
            f"Truncation levels must be finite, use PLUS_INFINITY for no truncation (got {a})"
        )
    return a


def _exp(log_value: complex) -> complex:
    if log_value.real == -math.inf:
        return 0j
    try:
        return cmath.exp(log_value)
    except OverflowError:
        return complex(math.inf, math.inf)


def log_truncated_exp_moment(w: Union[complex, float], a: Level) -> complex:
    """log E[e^{wX} 1_{X<a}] = w^2/2 + log Phi(a - w)."""
    w = complex(w)
    a = _check_level(a)
    if a is PLUS_INFINITY:
        return w * w / 2.0
    return wrap_log(w * w / 2.0 + log_phi_complex(a - w))


def truncated_exp_moment(w: Union[complex, float], a: Level) -> complex:
    """E[e^{wX} 1_{X<a}] for X standard normal.

    Args:
        w (Union[complex, float]): the exponent
        a (Level): the truncation level, a finite real or PLUS_INFINITY

    Returns:
        complex: the moment (inf if it overflows, see log_truncated_exp_moment)
    """
    return _exp(log_truncated_exp_moment(w, a))


def log_upper_truncated_exp_moment(w: Union[complex, float], a: float) -> complex:
    """log E[e^{wX} 1_{X>a}] = w^2/2 + log Phi(w - a)."""
    w = complex(w)
    a = _check_level(a)
    assert a is not PLUS_INFINITY, "The upper tail above +infinity is empty"
    return wrap_log(w * w / 2.0 + log_phi_complex(w - a))


def upper_truncated_exp_moment(w: Union[complex, float], a: float) -> complex:
    return _exp(log_upper_truncated_exp_moment(w, a))


def log_truncated_exp_moment_bivariate(
    s: float, sigma: float, tau: float, rho: float, a: Level
) -> complex:
    """log E[e^{s(sigma X + i tau Y)} 1_{X<a}] for standard (X, Y) with correlation rho.

    Writing Y = rho X + sqrt(1 - rho^2) W, the W part integrates to e^{-s^2 tau^2 (1 - rho^2) / 2}.
    """
    assert abs(rho) <= 1.0, f"rho must lie in [-1, 1], got {rho}"
    damping = -0.5 * s * s * tau * tau * (1.0 - rho * rho)
    return wrap_log(damping + log_truncated_exp_moment(s * complex(sigma, tau * rho), a))


def truncated_exp_moment_bivariate(
    s: float, sigma: float, tau: float, rho: float, a: Level
) -> complex:
    return _exp(log_truncated_exp_moment_bivariate(s, sigma, tau, rho, a))


class SaddleRegime(str, Enum):
    BoundaryDominated = "BoundaryDominated"
    SaddleDominated = "SaddleDominated"
    TwoTerm = "TwoTerm"
    CriticalReal = "CriticalReal"


def _log_saddle_term(w: complex, n: float) -> complex:
    return w * w * n / 2.0


def _log_boundary_term(w: complex, a: float, n: float) -> complex:
    # (2 pi n)^{-1/2} (w - a)^{-1} e^{n (a w - a^2 / 2)}
    return n * (a * w - a * a / 2.0) - 0.5 * math.log(2 * math.pi * n) - cmath.log(w - a)


def _log_add(x: complex, y: complex) -> complex:
    if y.real > x.real:
        x, y = y, x
    return x + cmath.log(1.0 + cmath.exp(y - x))


def log_saddle_exact(w: Union[complex, float], a_seq: Callable[[float], float], n: float) -> complex:
    """log F(n) with F(n) = E[e^{w sqrt(n) X} 1_{X < sqrt(n) a(n)}]."""
    root_n = math.sqrt(n)
    return log_truncated_exp_moment(complex(w) * root_n, root_n * float(a_seq(n)))


def extrapolated_limit(a_seq: Callable[[float], float], n: float) -> float:
    """Limit of a(n) assuming a(n) = a + c / sqrt(n) + o(1 / sqrt(n)): 2 a(4n) - a(n)."""
    return 2.0 * float(a_seq(4.0 * n)) - float(a_seq(n))


def log_saddle_asymptotic(
    w: Union[complex, float],
    a_seq: Callable[[float], float],
    n: float,
    a_limit: Optional[float] = None,
    critical_c: Optional[float] = None,
) -> Tuple[complex, SaddleRegime]:
    """Leading asymptotics of log F(n) and the regime producing it.

    With w = u + iv and a the limit of a(n):
        u + |v| < a                  -> SaddleDominated, e^{w^2 n / 2}
        u - |v| >= a, u + |v| > a    -> BoundaryDominated, (2 pi n)^{-1/2} (w - a)^{-1} e^{n(a w - a^2/2)}
        u - |v| < a < u + |v|        -> TwoTerm, the sum of both terms
        v = 0 and u = a              -> CriticalReal, Phi(c) e^{w^2 n / 2} with a(n) = w + c / sqrt(n)
    The boundary term is always evaluated at a = a(n).

    a is a_limit when given. Otherwise it is extrapolated from a(n) and a(4n) under
    a(n) = a + c / sqrt(n), and u + |v| counts as equal to it within EXTRAPOLATION_RTOL, so that
    e.g. a(n) = 1 + 0.7 / sqrt(n) at w = 1 is the critical case with c = 0.7. In the critical case c
    is critical_c, or sqrt(n) (a(n) - u) when not given.

    Raises:
        SaddleRegimeError: when u + |v| = a with v != 0
    """
    assert n > 0, f"n must be positive, got {n}"
    w = complex(w)
    u, v = w.real, abs(w.imag)
    a_n = float(a_seq(n))
    assert math.isfinite(a_n), f"a(n) must be finite, got {a_n}"
    if a_limit is None:
        a = extrapolated_limit(a_seq, n)
        assert math.isfinite(a), f"a(4n) must be finite, got {a_seq(4.0 * n)}"
        on_critical_line = abs(u + v - a) <= EXTRAPOLATION_RTOL * max(1.0, abs(a))
    else:
        a = float(a_limit)
        on_critical_line = u + v == a

    if on_critical_line:
        if v != 0:
            raise SaddleRegimeError(
                f"w={w} lies on u+|v|=a={a} with v != 0, no asymptotic regime applies"
            )
        c = critical_c if critical_c is not None else math.sqrt(n) * (a_n - u)
        return (
            _log_saddle_term(w, n) + log_phi_complex(c),
            SaddleRegime.CriticalReal,
        )
    if u + v < a:
        return _log_saddle_term(w, n), SaddleRegime.SaddleDominated
    if u - v >= a:
        return _log_boundary_term(w, a_n, n), SaddleRegime.BoundaryDominated
    return (
        _log_add(_log_saddle_term(w, n), _log_boundary_term(w, a_n, n)),
        SaddleRegime.TwoTerm,
    )


def saddle_asymptotic(
    w: Union[complex, float],
    a_seq: Callable[[float], float],
    n: float,
    a_limit: Optional[float] = None,
    critical_c: Optional[float] = None,
) -> Tuple[complex, SaddleRegime]:
    log_approx, regime = log_saddle_asymptotic(w, a_seq, n, a_limit, critical_c)
    return _exp(log_approx), regime


def saddle_bounds_check(w: float, a: float) -> Tuple[float, float]:
    """Dominating bound e^{aw - a^2/2} of the relevant truncated moment.

    Returns:
        Tuple[float, float]: (bound on E[e^{wX} 1_{X<a}], nan) if w > a,
            (nan, bound on E[e^{wX} 1_{X>a}]) if w < a
    """
    w, a = float(w), float(a)
    if not (math.isfinite(w) and math.isfinite(a)):
        raise ValueError(f"Finite inputs required, got w={w}, a={a}")
    if w == a:
        raise ValueError("saddle_bounds_check needs w != a")
    bound = math.exp(a * w - a * a / 2.0)
    if w > a:
        return bound, math.nan
    return math.nan, bound
