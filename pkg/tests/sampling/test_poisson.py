import numpy as np
import pytest

from cremjax.sampling.poisson import BLOCK_SIZE, poisson_arrivals
from cremjax.sampling.streams import stream
from cremjax.types import Purpose


class TestPoissonArrivals:

    @classmethod
    def setup_class(cls):
        cls.seed_path = stream(seed=2, replica=1, purpose=Purpose.ARRIVALS)

    def test_prefix(self):
        short = poisson_arrivals(10.0, self.seed_path)
        long = poisson_arrivals(3.0 * BLOCK_SIZE, self.seed_path)
        assert len(long) > BLOCK_SIZE, "The long horizon must span several blocks"
        assert np.array_equal(short.p, long.p[: len(short)]), "Arrivals up to T1 must be a prefix of those up to T2"
        assert np.all(long.p[len(short):] > 10.0)

    def test_sorted_and_truncated(self):
        arrivals = poisson_arrivals(100.0, self.seed_path)
        assert np.all(np.diff(arrivals.p) > 0), "Arrival times are increasing"
        assert arrivals.p[0] > 0 and arrivals.p[-1] <= 100.0
        assert arrivals.horizon == 100.0

    def test_intensity(self):
        horizon = 20000.0
        count = len(poisson_arrivals(horizon, self.seed_path))
        assert abs(count - horizon) < 5 * np.sqrt(horizon), f"{count} arrivals on [0, {horizon}]"

    def test_bad_horizon(self):
        with pytest.raises(AssertionError):
            poisson_arrivals(0.0, self.seed_path)
