import numpy as np
import pytest

import jax

from cremjax.partition.evaluation import make_rem_config
from cremjax.sampling.gaussian import gaussian_pairs, standard_complex_normal
from cremjax.sampling.streams import make_key, root_key, stream
from cremjax.types import Purpose, RemConfig, SeedPath


class TestStreams:

    def test_keys_are_pure(self):
        path = stream(seed=7, replica=3, purpose=Purpose.ARRIVALS)
        assert np.array_equal(make_key(path), make_key(path)), "The same seed path must give the same key"

    def test_keys_are_distinct(self):
        paths = [stream(7, 0, Purpose.PAIRS), stream(7, 1, Purpose.PAIRS), stream(7, 0, Purpose.ARRIVALS), stream(8, 0, Purpose.PAIRS)]
        keys = {tuple(np.asarray(make_key(path)).tolist()) for path in paths}
        assert len(keys) == len(paths), f"Expected {len(paths)} distinct keys, got {len(keys)}"

    def test_high_seed_word_matters(self):
        low, high = root_key(5), root_key(5 + 2**32)
        assert not np.array_equal(low, high), "Seeds differing in their high word must differ"
        with pytest.raises(AssertionError):
            root_key(2**64)

    def test_seed_path_helpers(self):
        path = SeedPath(seed=1, replica=2)
        assert path.with_purpose(Purpose.STABLE).to_tuple() == (1, 2, int(Purpose.STABLE))
        assert path.with_replica(9).to_tuple() == (1, 9, int(Purpose.PAIRS))


class TestGaussianPairs:

    @classmethod
    def setup_class(cls):
        cls.cfg = RemConfig(n=11.0, N=2**16, rho=0.5, seed=3)

    def test_reproducible(self):
        a, b = gaussian_pairs(self.cfg, 4), gaussian_pairs(self.cfg, 4)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y), "Same replica, same pairs"
        c = gaussian_pairs(self.cfg, 5)
        assert not np.array_equal(a.x, c.x), "Different replicas must give different pairs"
        assert a.seed_path.to_tuple() == (3, 4, int(Purpose.PAIRS))

    def test_moments(self):
        batch = gaussian_pairs(self.cfg, 0)
        x, y = np.asarray(batch.x), np.asarray(batch.y)
        assert len(batch) == self.cfg.N
        # sd of these estimates is about 1 / sqrt(N) = 0.004
        assert abs(x.mean()) < 0.02 and abs(x.std() - 1.0) < 0.02, f"X is not standard: {x.mean()}, {x.std()}"
        assert abs(y.std() - 1.0) < 0.02, f"Y is not standard: {y.std()}"
        corr = np.corrcoef(x, y)[0, 1]
        assert abs(corr - 0.5) < 0.02, f"corr(X, Y) = {corr}, expected 0.5"

    def test_extreme_correlations(self):
        batch = gaussian_pairs(make_rem_config(N=1000, rho=1.0, seed=3), 0)
        assert np.array_equal(batch.x, batch.y), "rho = 1 means Y = X"
        batch = gaussian_pairs(make_rem_config(N=1000, rho=-1.0, seed=3), 0)
        assert np.array_equal(batch.x, -batch.y), "rho = -1 means Y = -X"
        batch = gaussian_pairs(make_rem_config(N=1000, rho=1.0, seed=3), 0)
        assert np.array_equal(batch.x, gaussian_pairs(make_rem_config(N=1000, rho=0.0, seed=3), 0).x), (
            "X must not depend on rho"
        )

    def test_explicit_seed_path(self):
        path = SeedPath(seed=11, replica=2, purpose=int(Purpose.PAIRS))
        batch = gaussian_pairs(self.cfg, path)
        assert batch.seed_path == path

    def test_standard_complex_normal(self):
        xi = np.asarray(standard_complex_normal(stream(0, 0, Purpose.GAUSSIAN), (50000,)))
        assert abs(np.mean(np.abs(xi) ** 2) - 1.0) < 0.03, "E|xi|^2 = 1"
        assert abs(np.mean(xi * xi)) < 0.03, "E[xi^2] = 0"
