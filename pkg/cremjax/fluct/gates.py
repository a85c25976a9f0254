"""Statistical gates comparing a replica ensemble with the limit law of its plan.

Each check records its statistic, the threshold it was held to and whether it passed. Thresholds
default to p = 0.01 for the KS, chi-square and correlation tests and to the moment tolerances in each signature;
every one of them can be overridden by keyword.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from cremjax.analytic.zeta import (
    sample_tail_remainder,
    sample_zetap,
    zetap_capped_horizon,
    zetap_eval,
    zetap_tilde_eval,
)
from cremjax.errors import (
    GatedTestFailure,
    InsufficientReplicasError,
    LimitMismatchError,
    StableRegressionError,
)
from cremjax.fluct.ensemble import ReplicaEnsemble
from cremjax.fluct.plans import LimitKind
from cremjax.sampling.stable import isotropic_stable_complex
from cremjax.types import Purpose, SeedPath

MIN_REPLICAS = 100
P_THRESHOLD = 0.01


@dataclass
class LimitReport:
    name: str
    passed: bool
    checks: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def add_check(self, name: str, statistic: float, threshold: float, passed: bool):
        self.checks[name] = {
            "statistic": float(statistic),
            "threshold": float(threshold),
            "passed": bool(passed),
        }
        self.passed = all(check["passed"] for check in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "details": self.details,
        }


def enforce(report: LimitReport) -> LimitReport:
    """Raise GatedTestFailure unless the report passed."""
    if not report.passed:
        failed = [name for name, check in report.checks.items() if not check["passed"]]
        raise GatedTestFailure(f"Gate {report.name} failed on {failed}", report=report)
    return report


def _check_size(ens: ReplicaEnsemble, min_replicas: int):
    if len(ens) < min_replicas:
        raise InsufficientReplicasError(f"The test needs at least {min_replicas} replicas, got {len(ens)}")


# ================ Complex Gaussian ================


def test_gaussian_limit(
    ens: ReplicaEnsemble,
    variance: Optional[float] = None,
    second_moment_tol: float = 0.1,
    pseudo_moment_tol: float = 0.1,
    p_threshold: float = P_THRESHOLD,
    min_replicas: int = MIN_REPLICAS,
) -> LimitReport:
    """Checks against N_C(0, v): E|.|^2 within v +- tol, |E(.)^2| < tol, KS of both parts against
    N(0, v/2), and a correlation test between the parts.

    Passing an explicit variance runs the checks whatever the plan says.

    Raises:
        LimitMismatchError: if the plan limit is not complex Gaussian and no variance is given
        InsufficientReplicasError: with fewer than min_replicas samples
    """
    limit = ens.plan.limit
    if variance is None:
        if limit.kind != LimitKind.ComplexGaussian:
            raise LimitMismatchError(f"The plan limit is {limit.kind.value}, not ComplexGaussian")
        variance = limit.variance
    _check_size(ens, min_replicas)
    samples = ens.samples
    report = LimitReport(name="gaussian", passed=True, details={"variance": variance, "replicas": len(ens)})

    second_moment = float(np.mean(np.abs(samples) ** 2))
    report.add_check(
        "second_moment",
        second_moment,
        second_moment_tol,
        abs(second_moment - variance) <= second_moment_tol,
    )
    pseudo_moment = abs(complex(np.mean(samples**2)))
    report.add_check("pseudo_moment", pseudo_moment, pseudo_moment_tol, pseudo_moment <= pseudo_moment_tol)

    scale = math.sqrt(variance / 2.0)
    for part, values in (("re", samples.real), ("im", samples.imag)):
        result = stats.kstest(values, stats.norm(loc=0.0, scale=scale).cdf)
        report.add_check(f"ks_{part}", result.pvalue, p_threshold, result.pvalue > p_threshold)
    correlation = stats.pearsonr(samples.real, samples.imag)
    report.add_check("independence", correlation.pvalue, p_threshold, correlation.pvalue > p_threshold)
    report.details["correlation"] = float(correlation.statistic)
    return report


# ================ Isotropic stable ================


def stable_exponent_regression(
    samples: np.ndarray,
    radii: Optional[np.ndarray] = None,
    n_directions: int = 16,
    phi_range=(0.05, 0.9),
) -> Dict[str, float]:
    """Slope of log(-log |phi(z)|) against log |z| for the empirical characteristic function
    phi(z) = mean exp(i Re(S conj z)), averaged over n_directions arguments of z.

    Samples are scaled by their median modulus first, so the slope is scale-free. Only radii with
    |phi| inside phi_range enter the fit.

    Raises:
        StableRegressionError: with fewer than 5 usable radii
    """
    samples = np.asarray(samples, dtype=complex)
    samples = samples / np.median(np.abs(samples))
    if radii is None:
        radii = np.geomspace(0.02, 5.0, 60)
    angles = 2 * np.pi * np.arange(n_directions) / n_directions
    directions = np.exp(1j * angles)
    phi = np.empty(len(radii))
    for i, r in enumerate(radii):
        z = r * directions
        # Re(S conj z) for every sample and direction
        projections = np.real(samples[:, None] * np.conj(z)[None, :])
        phi[i] = np.abs(np.mean(np.exp(1j * projections), axis=0)).mean()
    usable = (phi > phi_range[0]) & (phi < phi_range[1])
    if usable.sum() < 5:
        raise StableRegressionError(
            f"Only {int(usable.sum())} radii have |phi| in {phi_range}; widen the grid"
        )
    fit = stats.linregress(np.log(radii[usable]), np.log(-np.log(phi[usable])))
    return {
        "alpha_hat": float(fit.slope),
        "stderr": float(fit.stderr),
        "ci_low": float(fit.slope - 1.96 * fit.stderr),
        "ci_high": float(fit.slope + 1.96 * fit.stderr),
        "n_radii": int(usable.sum()),
    }


def isotropy_test(samples: np.ndarray, n_bins: int = 16):
    angles = np.angle(samples)
    counts, _ = np.histogram(angles, bins=n_bins, range=(-np.pi, np.pi))
    return stats.chisquare(counts)


def test_stable_limit(
    ens: ReplicaEnsemble,
    alpha: Optional[float] = None,
    alpha_tol: float = 0.15,
    p_threshold: float = P_THRESHOLD,
    radii: Optional[np.ndarray] = None,
    n_reference: Optional[int] = None,
    min_replicas: int = MIN_REPLICAS,
) -> LimitReport:
    """Checks against the isotropic alpha-stable law: uniform arguments (chi-square), exponent
    regression on the characteristic function, and a two-sample KS test of median-matched moduli
    against direct draws of the stable sampler.

    Raises:
        LimitMismatchError: if the plan limit is not isotropic stable and no alpha is given
        StableRegressionError: if the regression grid has too few usable radii
    """
    limit = ens.plan.limit
    if alpha is None:
        if limit.kind != LimitKind.IsotropicStable:
            raise LimitMismatchError(f"The plan limit is {limit.kind.value}, not IsotropicStable")
        alpha = limit.alpha
    _check_size(ens, min_replicas)
    samples = ens.samples
    report = LimitReport(name="stable", passed=True, details={"alpha": alpha, "replicas": len(ens)})

    chi2 = isotropy_test(samples)
    report.add_check("isotropy", chi2.pvalue, p_threshold, chi2.pvalue > p_threshold)

    regression = stable_exponent_regression(samples, radii)
    report.details["regression"] = regression
    report.add_check(
        "exponent",
        regression["alpha_hat"],
        alpha_tol,
        abs(regression["alpha_hat"] - alpha) <= alpha_tol,
    )

    n_reference = len(samples) if n_reference is None else n_reference
    reference = isotropic_stable_complex(
        alpha,
        SeedPath(seed=ens.config.seed, replica=0, purpose=int(Purpose.STABLE)),
        size=n_reference,
    )
    moduli = np.abs(samples) / np.median(np.abs(samples))
    reference_moduli = np.abs(reference) / np.median(np.abs(reference))
    ks = stats.ks_2samp(moduli, reference_moduli)
    report.add_check("ks_modulus", ks.pvalue, p_threshold, ks.pvalue > p_threshold)
    return report


# ================ Poisson zeta ================


def _zeta_draw(argument: complex, tilde: bool, horizon: float, tail: bool, seed_path: SeedPath) -> complex:
    sample = sample_zetap(horizon, seed_path.with_purpose(Purpose.ZETA))
    value = zetap_tilde_eval(sample, argument) if tilde else zetap_eval(sample, argument)
    if tail:
        value += sample_tail_remainder(argument, horizon, seed_path)
    return value


def simulate_zetap_limit(
    argument: complex,
    tilde: bool,
    replicas: int,
    seed: int,
    tol: float = 1e-3,
    tail: bool = True,
    n_jobs: int = 1,
) -> np.ndarray:
    """Independent draws of zeta_P(argument) (or zeta~_P), each truncated at a horizon reaching tol and
    completed by a Gaussian draw of the remainder when tail is set."""
    horizon, _ = zetap_capped_horizon(argument, tol)
    draws = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_zeta_draw)(argument, tilde, horizon, tail, SeedPath(seed=seed, replica=r))
        for r in range(replicas)
    )
    return np.asarray(draws, dtype=complex)


def test_zetap_limit(
    ens: ReplicaEnsemble,
    zeta_replicas: int,
    p_threshold: float = P_THRESHOLD,
    tol: float = 1e-3,
    n_jobs: int = 1,
    min_replicas: int = MIN_REPLICAS,
) -> LimitReport:
    """Two-sample KS tests of the real parts, imaginary parts and moduli of the ensemble against
    directly simulated values of the plan's Poisson zeta law (argument conjugated for rho = -1).

    Raises:
        LimitMismatchError: if the plan limit is not a Poisson zeta law
    """
    limit = ens.plan.limit
    if limit.kind != LimitKind.ZetaP:
        raise LimitMismatchError(f"The plan limit is {limit.kind.value}, not ZetaP")
    _check_size(ens, min_replicas)
    oracle = simulate_zetap_limit(
        limit.argument, limit.tilde, zeta_replicas, ens.config.seed, tol=tol, n_jobs=n_jobs
    )
    samples = ens.samples
    report = LimitReport(
        name="zetap",
        passed=True,
        details={
            "argument": limit.argument,
            "tilde": limit.tilde,
            "conjugate": limit.conjugate,
            "replicas": len(ens),
            "zeta_replicas": zeta_replicas,
        },
    )
    for part, ours, theirs in (
        ("re", samples.real, oracle.real),
        ("im", samples.imag, oracle.imag),
        ("modulus", np.abs(samples), np.abs(oracle)),
    ):
        ks = stats.ks_2samp(ours, theirs)
        report.add_check(f"ks_{part}", ks.pvalue, p_threshold, ks.pvalue > p_threshold)
    return report
