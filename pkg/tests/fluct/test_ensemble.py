import math

import numpy as np
import pandas as pd
import pytest

from cremjax.fluct.ensemble import normalized_sample, run_ensemble
from cremjax.fluct.plans import LimitKind, make_plan
from cremjax.loggers.csv import LoggerCSV
from cremjax.partition.evaluation import make_rem_config


class TestEnsemble:

    @classmethod
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=1.0, seed=11)
        cls.plan = make_plan(0.4 + 0.7j, cls.cfg.rho, cls.cfg.n)

    def test_reproducible_across_workers(self):
        serial = run_ensemble(self.plan, self.cfg, replicas=12, n_jobs=1)
        parallel = run_ensemble(self.plan, self.cfg, replicas=12, n_jobs=4)
        assert np.array_equal(serial.samples, parallel.samples), "Samples must not depend on n_jobs"
        assert serial.samples[3] == normalized_sample(self.cfg, self.plan, 3)

    def test_beta_zero(self):
        plan = make_plan(0.0, self.cfg.rho, self.cfg.n)
        assert plan.limit.kind == LimitKind.OutOfScopeRealCase
        ens = run_ensemble(plan, self.cfg, replicas=3)
        # Z_N(0) = N = m_N exactly
        assert np.all(np.abs(ens.samples) < 1e-9 * math.sqrt(self.cfg.N))

    def test_gaussian_moments(self):
        ens = run_ensemble(self.plan, self.cfg, replicas=300, n_jobs=2)
        # E|.|^2 = 1 - N^{-|beta|^2}, E(.)^2 is of order N^{-2 tau^2}
        assert abs(np.mean(np.abs(ens.samples) ** 2) - 1.0) < 0.25
        assert abs(np.mean(ens.samples**2)) < 0.25
        assert abs(np.mean(ens.samples)) < 0.25

    def test_conjugate_and_frame(self):
        ens = run_ensemble(self.plan, self.cfg, replicas=5)
        conj = ens.conjugate()
        assert np.array_equal(conj.samples, np.conj(ens.samples))
        assert conj.plan.beta.beta == self.plan.beta.beta.conjugate()
        frame = ens.to_frame()
        assert list(frame.columns) == ["replica", "re", "im"] and len(frame) == 5

    def test_mismatched_config(self):
        with pytest.raises(AssertionError):
            run_ensemble(self.plan, make_rem_config(n=8.0, rho=0.5, seed=11), replicas=2)
        with pytest.raises(AssertionError):
            run_ensemble(self.plan, make_rem_config(n=9.0, rho=1.0, seed=11), replicas=2)

    def test_logger(self, tmp_path):
        logger = LoggerCSV(dir_metrics=str(tmp_path))
        run_ensemble(self.plan, self.cfg, replicas=4, logger=logger)
        logger.close()
        frame = pd.read_csv(tmp_path / "metrics.csv")
        assert len(frame) == 8, f"Expected 4 replicas x 2 parts, got {len(frame)} rows"
        assert set(frame["metric_name"]) == {"fluct/sample_re", "fluct/sample_im"}
