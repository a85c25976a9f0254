import cmath
import math

import numpy as np
import pytest

from cremjax.errors import BoundaryError, FrameError
from cremjax.partition.evaluation import eval_derivative, eval_point, make_rem_config
from cremjax.partition.frames import (
    Frame,
    d_n,
    d_n_prime,
    delta_n,
    frame_map,
    local_frame_eval,
    partition_handle,
    xi_n_eval,
)
from cremjax.sampling.gaussian import gaussian_pairs


class TestFrameMaps:

    @classmethod
    def setup_class(cls):
        cls.arc_point = cmath.exp(1.3j)
        cls.segment_point = complex(1.0, math.sqrt(2.0) - 1.0)

    def test_delta_n(self):
        n = 10.0
        expected = math.fmod(n * self.arc_point.real * self.arc_point.imag, 2 * math.pi)
        assert delta_n(self.arc_point, n) == pytest.approx(expected)
        # on the lattice n sigma0 tau0 = 2 pi k the phase shift vanishes
        n_lattice = 3 * 2 * math.pi / (self.arc_point.real * self.arc_point.imag)
        assert delta_n(self.arc_point, n_lattice) == 0.0
        with pytest.raises(BoundaryError):
            delta_n(0.3 + 0.3j, n)
        with pytest.raises(BoundaryError):
            delta_n(cmath.exp(0.2j), n)

    def test_d_n(self):
        n = 50.0
        value = d_n_prime(self.segment_point, n)
        assert -math.pi <= value.imag < math.pi
        raw = 1j * self.segment_point.imag**2 * n - self.segment_point * math.log(4 * math.pi * n) / (2 * math.sqrt(2.0))
        assert value.real == pytest.approx(raw.real)
        turns = (raw.imag - value.imag) / (2 * math.pi)
        assert turns == pytest.approx(round(turns), abs=1e-9), "d_N' is defined mod 2 pi i"
        assert d_n(self.segment_point, n) == pytest.approx(value / (math.sqrt(2.0) * self.segment_point.imag))
        with pytest.raises(BoundaryError):
            d_n_prime(0.5 + 0.5j, n)

    def test_frame_map(self):
        n = 10.0
        offset, scale = frame_map(0.3 + 1.2j, n, Frame.sqrt_n_B3)
        assert offset == 0.3 + 1.2j and scale == pytest.approx(1 / math.sqrt(n))
        offset, scale = frame_map(self.arc_point, n, "boundary13")
        delta = delta_n(self.arc_point, n)
        assert offset == pytest.approx(self.arc_point * (1 + 1j * delta / n))
        assert scale == pytest.approx(self.arc_point / n)
        offset, scale = frame_map(self.segment_point, n, Frame.boundary12, angle=0.0)
        assert offset == pytest.approx(self.segment_point + d_n(self.segment_point, n) / n)
        assert scale == pytest.approx(1 / n)

    def test_frame_errors(self):
        with pytest.raises(FrameError):
            frame_map(0.2 + 0.2j, 10.0, Frame.sqrt_n_B3)
        with pytest.raises(FrameError):
            frame_map(0.2 + 0.2j, 10.0, Frame.boundary13)
        with pytest.raises(FrameError):
            frame_map(self.arc_point, 10.0, Frame.boundary12)
        with pytest.raises(ValueError):
            frame_map(self.arc_point, 10.0, "no_such_frame")


class TestLocalEvaluation:

    @classmethod
    def setup_class(cls):
        cls.cfg = make_rem_config(n=8.0, rho=1.0, seed=5)
        cls.batches = [gaussian_pairs(cls.cfg, r) for r in range(300)]

    def test_sqrt_n_B3_normalization(self):
        # E|G_N(t)|^2 = 1 - N^{-|beta|^2} for real t
        values = np.array([local_frame_eval(batch, self.cfg.n, 0.3 + 1.2j, Frame.sqrt_n_B3, 0.0) for batch in self.batches])
        assert abs(np.mean(values)) < 0.2, f"G_N is centered, mean {np.mean(values)}"
        assert 0.75 < np.mean(np.abs(values) ** 2) < 1.25, f"E|G_N|^2 = {np.mean(np.abs(values) ** 2)}"

    def test_vectorized(self):
        t = np.array([0.0, 0.5 + 0.1j, -0.3j])
        values = local_frame_eval(self.batches[0], self.cfg.n, 0.3 + 1.2j, Frame.sqrt_n_B3, t)
        assert values.shape == (3,)
        assert values[0] == pytest.approx(local_frame_eval(self.batches[0], self.cfg.n, 0.3 + 1.2j, Frame.sqrt_n_B3, 0.0))

    def test_rho_must_be_one(self):
        batch = gaussian_pairs(make_rem_config(n=8.0, rho=0.5, seed=5), 0)
        with pytest.raises(FrameError):
            local_frame_eval(batch, 8.0, 0.3 + 1.2j, Frame.sqrt_n_B3, 0.0)
        with pytest.raises(FrameError):
            xi_n_eval(batch, 8.0, 1.2 + 0.5j)

    def test_partition_handle(self):
        batch, n = self.batches[0], self.cfg.n
        offset, scale = 0.2 + 1.0j, 0.1 + 0.0j
        handle = partition_handle(batch, n, offset=offset, scale=scale)
        t = np.array([0.0, 1.0 + 1.0j])
        ratio = handle(t) / np.array([eval_point(batch, n, offset + scale * s).to_complex() for s in t])
        assert ratio[0] == pytest.approx(ratio[1], rel=1e-10), "The handle is Z_N up to a constant factor"
        derivative = handle.derivative(t) / ratio[0]
        expected = scale * np.array([eval_derivative(batch, n, offset + scale * s) for s in t])
        assert derivative == pytest.approx(expected, rel=1e-10)

    def test_xi_n_is_finite(self):
        value = xi_n_eval(self.batches[0], self.cfg.n, 1.2 + 0.5j)
        assert np.isfinite(value.real) and np.isfinite(value.imag)
