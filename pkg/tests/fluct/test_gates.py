import math

import numpy as np
import pytest

from cremjax.errors import (
    GatedTestFailure,
    InsufficientReplicasError,
    LimitMismatchError,
    StableRegressionError,
)
from cremjax.fluct import gates
from cremjax.fluct.ensemble import ReplicaEnsemble, run_ensemble
from cremjax.fluct.plans import CaseTag, LimitKind, make_plan
from cremjax.partition.evaluation import make_rem_config
from cremjax.sampling.stable import isotropic_stable_complex
from cremjax.types import Purpose, SeedPath

# the draws below are fixed by their seeds; a small threshold keeps the passing cases far from the edge
P_TEST = 1e-4


def complex_gaussian(size: int, variance: float = 1.0, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


class TestGaussianGate:

    @classmethod
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=1.0, seed=0)
        cls.plan = make_plan(0.4 + 0.7j, 1.0, cls.cfg.n)

    def ensemble(self, samples: np.ndarray) -> ReplicaEnsemble:
        return ReplicaEnsemble(samples=samples, config=self.cfg, plan=self.plan)

    def test_passes_on_gaussian_samples(self):
        report = gates.test_gaussian_limit(
            self.ensemble(complex_gaussian(2000)), second_moment_tol=0.15, p_threshold=P_TEST
        )
        assert report.passed, f"Failed checks: {report.checks}"
        assert set(report.checks) == {"second_moment", "pseudo_moment", "ks_re", "ks_im", "independence"}
        assert gates.enforce(report) is report

    def test_fails_on_real_samples(self):
        samples = np.random.default_rng(1).standard_normal(500).astype(complex)
        report = gates.test_gaussian_limit(self.ensemble(samples), p_threshold=P_TEST)
        assert not report.passed
        assert not report.checks["pseudo_moment"]["passed"] and not report.checks["ks_im"]["passed"]
        with pytest.raises(GatedTestFailure) as excinfo:
            gates.enforce(report)
        assert excinfo.value.report is report

    def test_explicit_variance(self):
        report = gates.test_gaussian_limit(
            self.ensemble(complex_gaussian(2000, variance=0.5, seed=2)), variance=0.5, p_threshold=P_TEST
        )
        assert report.passed and report.details["variance"] == 0.5

    def test_size_and_mismatch(self):
        with pytest.raises(InsufficientReplicasError):
            gates.test_gaussian_limit(self.ensemble(complex_gaussian(50)))
        zeta_plan = make_plan(1.6 + 0.8j, 1.0, self.cfg.n)
        ens = ReplicaEnsemble(samples=complex_gaussian(200), config=self.cfg, plan=zeta_plan)
        with pytest.raises(LimitMismatchError):
            gates.test_gaussian_limit(ens)
        with pytest.raises(LimitMismatchError):
            gates.test_stable_limit(ens)

    def test_report_serializes(self):
        record = gates.test_gaussian_limit(self.ensemble(complex_gaussian(200)), p_threshold=P_TEST).to_dict()
        assert record["name"] == "gaussian" and isinstance(record["checks"]["ks_re"]["statistic"], float)


class TestGaussianGateOnHeavyTails:
    """Above the line sigma + |tau| = sqrt 2 with rho = 0 the normalized sums are stable, not Gaussian."""

    
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=0.0, seed=9)
        cls.plan = make_plan(1.6 + 0.8j, 0.0, cls.cfg.n, centering="power")
        cls.ens = run_ensemble(cls.plan, cls.cfg, replicas=150)

    def test_plan(self):
        assert self.plan.case_tag == CaseTag.C2a, f"case {self.plan.case_tag}"
        assert self.plan.limit.kind == LimitKind.IsotropicStable, f"limit {self.plan.limit.kind}"

    def test_second_moment_fails(self):
        with pytest.raises(LimitMismatchError):
            gates.test_gaussian_limit(self.ens)
        report = gates.test_gaussian_limit(self.ens, variance=1.0)
        assert report.checks["second_moment"]["passed"] is False, f"E|.|^2 = {report.checks['second_moment']}"
        assert not report.passed


class TestStableGate:

    @classmethod
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=0.5, seed=0)
        cls.alpha = 1.2
        cls.plan = make_plan(complex(math.sqrt(2.0) / cls.alpha, 0.5), 0.5, cls.cfg.n)
        draws = isotropic_stable_complex(cls.alpha, SeedPath(seed=99, purpose=int(Purpose.STABLE)), size=3000)
        cls.ens = ReplicaEnsemble(samples=3.0 * draws, config=cls.cfg, plan=cls.plan)

    def test_regression_recovers_exponents(self):
        fit = gates.stable_exponent_regression(self.ens.samples)
        assert abs(fit["alpha_hat"] - self.alpha) < 0.2, f"Estimated {fit['alpha_hat']}, expected {self.alpha}"
        assert fit["ci_low"] <= fit["alpha_hat"] <= fit["ci_high"] and fit["n_radii"] >= 5
        gaussian_fit = gates.stable_exponent_regression(complex_gaussian(3000, seed=4))
        assert abs(gaussian_fit["alpha_hat"] - 2.0) < 0.2, f"Gaussian samples gave {gaussian_fit['alpha_hat']}"

    def test_regression_needs_radii(self):
        with pytest.raises(StableRegressionError):
            gates.stable_exponent_regression(self.ens.samples, radii=np.array([0.01, 0.02, 100.0]))

    def test_passes_on_stable_samples(self):
        assert self.plan.limit.alpha == pytest.approx(self.alpha)
        report = gates.test_stable_limit(self.ens, alpha_tol=0.25, p_threshold=P_TEST)
        assert report.passed, f"Failed checks: {report.checks}"
        assert set(report.checks) == {"isotropy", "exponent", "ks_modulus"}

    def test_fails_on_gaussian_samples(self):
        ens = self.ens.replace(samples=complex_gaussian(3000, seed=5))
        report = gates.test_stable_limit(ens, alpha_tol=0.25, p_threshold=P_TEST)
        assert not report.checks["exponent"]["passed"]

    def test_isotropy(self):
        assert gates.isotropy_test(complex_gaussian(2000, seed=6)).pvalue > P_TEST
        skewed = np.abs(complex_gaussian(2000, seed=7))
        assert gates.isotropy_test(skewed).pvalue < P_TEST


class TestZetaGate:

    @classmethod
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=1.0, seed=0)
        cls.plan = make_plan(1.6 + 0.8j, 1.0, cls.cfg.n)

    def test_simulation(self):
        draws = gates.simulate_zetap_limit(self.plan.limit.argument, True, 20, seed=3, tol=1e-2)
        again = gates.simulate_zetap_limit(self.plan.limit.argument, True, 20, seed=3, tol=1e-2, n_jobs=3)
        assert draws.shape == (20,) and np.array_equal(draws, again)

    def test_passes_on_zeta_samples(self):
        samples = gates.simulate_zetap_limit(self.plan.limit.argument, self.plan.limit.tilde, 150, seed=7, tol=1e-2)
        ens = ReplicaEnsemble(samples=samples, config=self.cfg, plan=self.plan)
        report = gates.test_zetap_limit(ens, zeta_replicas=150, p_threshold=P_TEST, tol=1e-2)
        assert report.passed, f"Failed checks: {report.checks}"
        assert set(report.checks) == {"ks_re", "ks_im", "ks_modulus"}

    def test_fails_on_shifted_samples(self):
        samples = gates.simulate_zetap_limit(self.plan.limit.argument, self.plan.limit.tilde, 150, seed=7, tol=1e-2)
        ens = ReplicaEnsemble(samples=samples + 10.0, config=self.cfg, plan=self.plan)
        report = gates.test_zetap_limit(ens, zeta_replicas=150, p_threshold=P_TEST, tol=1e-2)
        assert not report.checks["ks_re"]["passed"]

    def test_mismatch(self):
        gaussian_plan = make_plan(0.4 + 0.7j, 1.0, self.cfg.n)
        ens = ReplicaEnsemble(samples=complex_gaussian(200), config=self.cfg, plan=gaussian_plan)
        with pytest.raises(LimitMismatchError):
            gates.test_zetap_limit(ens, zeta_replicas=10)
