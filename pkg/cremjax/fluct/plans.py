"""Normalizations (m_N, v_N) of Z_N(beta) and the limit law of (Z_N - m_N) / v_N.

    C1a      sigma^2 < 1/2, |beta| < 1      m_N = N^{1 + (sigma^2 - tau^2)/2 + i sigma tau rho}, v_N = N^{1/2 + sigma^2}
    C1b      sigma^2 < 1/2, |beta| >= 1     same, now |m_N| = O(v_N)
    C1crit   sigma^2 = 1/2                  m_N = N^{1 + (1/2 - tau^2)/2 + i sigma tau rho}, v_N = N, limit N_C(0, 1/2)
    C2a      sigma > 1/sqrt 2, sigma + |tau| > sqrt 2
    C2b      sigma > 1/sqrt 2, sigma + |tau| < sqrt 2
    C2c      sigma > 1/sqrt 2, sigma + |tau| = sqrt 2

In C2, v_N = e^{sigma sqrt(n) b_N} and the limit is isotropic (sqrt 2 / sigma)-stable when |rho| < 1;
for rho = 1 the scale is the complex e^{beta sqrt(n) b_N} and the limit a Poisson zeta function
at beta / sqrt 2 (conj(beta) / sqrt 2 for rho = -1). Points with sigma < 0 use the plan of -beta,
which has the same law.

All normalizations are carried as complex logarithms: e^{beta sqrt(n) b_N} leaves double range
long before the sizes of interest.
"""

import cmath
import math
from enum import Enum
from typing import Optional, Union

import numpy as np
from flax import struct

from cremjax.core.phases import SQRT2, SQRT_HALF, compare_at_resolution
from cremjax.errors import PlanError
from cremjax.partition.evaluation import compute_bn
from cremjax.specfun.moments import log_truncated_exp_moment_bivariate
from cremjax.types import ComplexParam, log_to_complex

LOG_ZERO = complex(-math.inf, 0.0)


class CaseTag(str, Enum):
    C1a = "C1a"
    C1b = "C1b"
    C1crit = "C1crit"
    C2a = "C2a"
    C2b = "C2b"
    C2c = "C2c"


class LimitKind(str, Enum):
    ComplexGaussian = "ComplexGaussian"
    RealGaussian = "RealGaussian"
    IsotropicStable = "IsotropicStable"
    ZetaP = "ZetaP"
    OutOfScopeRealCase = "OutOfScopeRealCase"


class Centering(str, Enum):
    power = "power"
    truncated = "truncated"


@struct.dataclass
class LimitLaw:
    kind: LimitKind = struct.field(pytree_node=False)
    variance: Optional[float] = struct.field(pytree_node=False, default=None)
    alpha: Optional[float] = struct.field(pytree_node=False, default=None)
    argument: Optional[complex] = struct.field(pytree_node=False, default=None)
    tilde: bool = struct.field(pytree_node=False, default=False)
    conjugate: bool = struct.field(pytree_node=False, default=False)

    def __post_init__(self):
        if self.kind == LimitKind.IsotropicStable:
            assert 0 < self.alpha < 2, f"The stable index must lie in (0, 2), got {self.alpha}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "variance": self.variance,
            "alpha": self.alpha,
            "argument": self.argument,
            "tilde": self.tilde,
            "conjugate": self.conjugate,
        }


@struct.dataclass
class NormalizationPlan:
    beta: ComplexParam = struct.field(pytree_node=False)
    rho: float = struct.field(pytree_node=False)
    n: float = struct.field(pytree_node=False)
    log_m: complex = struct.field(pytree_node=False)
    log_v: complex = struct.field(pytree_node=False)
    limit: LimitLaw = struct.field(pytree_node=False)
    case_tag: CaseTag = struct.field(pytree_node=False)
    centering: Centering = struct.field(pytree_node=False, default=Centering.power)
    mirrored: bool = struct.field(pytree_node=False, default=False)

    def __post_init__(self):
        assert math.isfinite(self.log_v.real), f"v_N must be non-zero and finite, got log v_N = {self.log_v}"

    @property
    def m_N(self) -> complex:
        return log_to_complex(self.log_m)

    @property
    def v_N(self) -> complex:
        return log_to_complex(self.log_v)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.beta,
            "rho": self.rho,
            "n": self.n,
            "log_m": self.log_m,
            "log_v": self.log_v,
            "limit": self.limit.to_dict(),
            "case_tag": self.case_tag.value,
            "centering": self.centering.value,
            "mirrored": self.mirrored,
        }


def _log_power_center(sigma: float, tau: float, rho: float, n: float) -> complex:
    """log N^{1 + (sigma^2 - tau^2)/2 + i sigma tau rho}."""
    return n * complex(1.0 + 0.5 * (sigma * sigma - tau * tau), sigma * tau * rho)


def log_truncated_center(beta: Union[ComplexParam, complex], rho: float, n: float) -> complex:
    """log of N E[e^{sqrt(n)(sigma X + i tau Y)} 1_{X < b_N}], N = e^n."""
    beta = ComplexParam.parse(beta)
    return n + log_truncated_exp_moment_bivariate(math.sqrt(n), beta.sigma, beta.tau, rho, compute_bn(n))


def truncated_center(beta: Union[ComplexParam, complex], rho: float, n: float) -> complex:
    """The exact truncated-expectation centering (may overflow to inf; see log_truncated_center)."""
    return log_to_complex(log_truncated_center(beta, rho, n))


def classify_case(beta: Union[ComplexParam, complex]) -> CaseTag:
    beta = ComplexParam.parse(beta)
    sigma, tau = abs(beta.sigma), abs(beta.tau)
    side_sigma = compare_at_resolution(sigma, SQRT_HALF)
    if side_sigma == 0:
        return CaseTag.C1crit
    if side_sigma < 0:
        return CaseTag.C1a if compare_at_resolution(sigma * sigma + tau * tau, 1.0) < 0 else CaseTag.C1b
    side_line = compare_at_resolution(sigma + tau, SQRT2)
    if side_line > 0:
        return CaseTag.C2a
    return CaseTag.C2b if side_line < 0 else CaseTag.C2c


def make_plan(
    beta: Union[ComplexParam, complex, str],
    rho: float,
    n: float,
    centering: Optional[Union[Centering, str]] = None,
) -> NormalizationPlan:
    """The normalization of Z_N(beta) for the correlation rho at size n = log N.

    Args:
        beta: the inverse temperature
        rho (float): correlation of the energies and the phases, in [-1, 1]
        n (float): log N
        centering: for C2 plans, "truncated" (exact truncated expectation, the default) or "power"
            (its leading asymptotics, 0 when sigma + |tau| > sqrt 2). C1 plans always use "power".

    Raises:
        PlanError: for rho = 1 at sigma = sqrt 2 with sigma + |tau| <= sqrt 2
    """
    beta = ComplexParam.parse(beta)
    assert abs(rho) <= 1.0, f"rho must lie in [-1, 1], got {rho}"
    assert n > 0, f"n must be positive, got {n}"
    mirrored = beta.sigma < 0
    point = -beta if mirrored else beta
    sigma, tau = point.sigma, point.tau
    tag = classify_case(point)
    real_case = tau == 0.0

    if tag in (CaseTag.C1a, CaseTag.C1b, CaseTag.C1crit):
        if tag == CaseTag.C1crit:
            log_m = _log_power_center(SQRT_HALF, tau, rho, n)
            log_v, variance = complex(n), 0.5
        else:
            log_m = _log_power_center(sigma, tau, rho, n)
            log_v, variance = complex(n * (0.5 + sigma * sigma)), 1.0
        kind = LimitKind.OutOfScopeRealCase if real_case else LimitKind.ComplexGaussian
        limit = LimitLaw(kind=kind, variance=variance)
        return NormalizationPlan(
            beta=beta, rho=float(rho), n=float(n), log_m=log_m, log_v=log_v,
            limit=limit, case_tag=tag, centering=Centering.power, mirrored=mirrored,
        )

    centering = Centering(centering) if centering is not None else Centering.truncated
    unit_rho = abs(rho) == 1.0
    if unit_rho and tag != CaseTag.C2a and compare_at_resolution(sigma, SQRT2) == 0:
        raise PlanError(f"No normalization at sigma = sqrt(2) with sigma + |tau| <= sqrt(2) for rho = {rho}")

    sqrt_n_bn = math.sqrt(n) * compute_bn(n)
    if centering == Centering.truncated:
        log_m = log_truncated_center(point, rho, n)
    elif tag == CaseTag.C2a:
        log_m = LOG_ZERO
    else:
        log_m = _log_power_center(sigma, tau, rho, n)

    if unit_rho:
        scale_point = point.beta if rho == 1.0 else point.beta.conjugate()
        log_v = scale_point * sqrt_n_bn
        limit = LimitLaw(
            kind=LimitKind.ZetaP,
            argument=scale_point / SQRT2,
            tilde=centering == Centering.truncated,
            conjugate=rho == -1.0,
        )
    else:
        log_v = complex(sigma * sqrt_n_bn)
        limit = LimitLaw(kind=LimitKind.IsotropicStable, alpha=SQRT2 / sigma)
    if real_case:
        limit = LimitLaw(kind=LimitKind.OutOfScopeRealCase, alpha=SQRT2 / sigma)
    return NormalizationPlan(
        beta=beta, rho=float(rho), n=float(n), log_m=log_m, log_v=log_v,
        limit=limit, case_tag=tag, centering=centering, mirrored=mirrored,
    )


def plan_log_scale(plan: NormalizationPlan) -> float:
    """max(Re log m_N, Re log v_N) / n, whose limit is p(beta)."""
    return max(plan.log_m.real, plan.log_v.real) / plan.n


def conjugate_plan(plan: NormalizationPlan) -> NormalizationPlan:
    """The plan of conj Z_N(beta) = Z_N(conj beta), same rho.

    By the symmetry (beta, rho) -> (conj beta, -rho) of the law, it also equals the plan of (beta, -rho).
    """
    limit = plan.limit
    if limit.argument is not None:
        limit = limit.replace(argument=limit.argument.conjugate())
    return plan.replace(
        beta=plan.beta.conjugate(),
        log_m=plan.log_m.conjugate(),
        log_v=plan.log_v.conjugate(),
        limit=limit,
    )


def log_ratio(log_numerator: complex, log_denominator: complex) -> complex:
    """exp(log_numerator - log_denominator), with exact zero for a -inf numerator."""
    if np.isneginf(log_numerator.real):
        return 0j
    return cmath.exp(log_numerator - log_denominator)
