import math

import numpy as np
import pytest
from scipy import integrate, special

from cremjax.specfun.phi import (
    PhiBranch,
    log_one_minus_exp,
    log_phi_complex,
    phi_complex,
    phi_real,
)


def phi_oracle(z: complex) -> complex:
    """Phi(z) = erfc(-z / sqrt 2) / 2 through the Faddeeva function, valid for moderate |z|."""
    z = complex(z)
    u = -z / math.sqrt(2.0)
    return 0.5 * np.exp(-u * u) * special.wofz(1j * u)


class TestPhiComplex:

    @classmethod
    def setup_class(cls):
        rng = np.random.default_rng(1234)
        cls.points = rng.uniform(-4, 4, 200) + 1j * rng.uniform(-4, 4, 200)

    def test_real_axis(self):
        for x in np.linspace(-8, 8, 33):
            expected = special.ndtr(x)
            assert phi_real(x) == pytest.approx(expected, rel=1e-12, abs=1e-300), f"Phi({x}) differs from ndtr"

    def test_against_faddeeva(self):
        for z in self.points:
            value = phi_complex(z).value
            expected = phi_oracle(z)
            assert abs(value - expected) <= 1e-10 * max(1.0, abs(expected)), f"Phi({z}) = {value}, expected {expected}"

    def test_reflection(self):
        for z in self.points:
            total = phi_complex(z).value + phi_complex(-z).value
            assert abs(total - 1.0) < 1e-12, f"Phi(z) + Phi(-z) = {total} at z = {z}"

    def test_conjugation(self):
        for z in self.points[:20]:
            assert phi_complex(np.conj(z)).value == pytest.approx(np.conj(phi_complex(z).value), rel=1e-12), (
                f"Phi(conj z) must equal conj Phi(z) at {z}"
            )

    def test_branches(self):
        assert phi_complex(1.0 + 1.0j).branch_used == PhiBranch.series, "|z| <= 3 uses the series branch"
        assert phi_complex(10.0 + 1.0j).branch_used == PhiBranch.continued_fraction, "3 < |z| <= 26 branch"
        assert phi_complex(30.0).branch_used == PhiBranch.asymptotic_upper, "Large z near the positive axis"
        assert phi_complex(-30.0).branch_used == PhiBranch.asymptotic_lower, "Large z near the negative axis"

    def test_asymptotic_sectors(self):
        for angle in (0.0, 0.5, 1.5, 2.0, 2.5, 3.0, -1.0, -2.5):
            z = 30.0 * complex(math.cos(angle), math.sin(angle))
            if z.real <= 0:
                expected = math.log(0.5) - z * z / 2 + np.log(special.wofz(-1j * z / math.sqrt(2.0)))
            else:
                expected = np.log(1.0 - 0.5 * np.exp(-z * z / 2) * special.wofz(1j * z / math.sqrt(2.0)))
            value = phi_complex(z).log_value
            assert abs(np.exp(value - expected) - 1.0) < 0.01, f"log Phi({z}) = {value}, expected {expected}"

    def test_log_is_finite_far_out(self):
        value = log_phi_complex(-60.0 + 5.0j)
        assert math.isfinite(value.real), f"log Phi must stay finite where Phi underflows, got {value}"
        assert value.real == pytest.approx(-(60.0**2 - 25.0) / 2 - math.log(60.0 * math.sqrt(2 * math.pi)), rel=1e-3), (
            "Leading order of log Phi in the lower tail"
        )

    def test_log_one_minus_exp(self):
        for log_u in (-40.0 + 0j, -1.0 + 0.5j, 2.0 + 1.0j):
            expected = np.log(1.0 - np.exp(log_u))
            value = log_one_minus_exp(log_u)
            assert np.exp(value) == pytest.approx(np.exp(expected), rel=1e-12), f"log(1 - e^{log_u}) differs"

    def test_non_finite_is_refused(self):
        with pytest.raises(ValueError):
            phi_complex(complex(math.inf, 0.0))


class TestQuadratureOracle:

    def test_real_integral(self):
        for x in (-2.0, 0.3, 1.7):
            value, _ = integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), -math.inf, x)
            assert phi_real(x) == pytest.approx(value, rel=1e-10), f"Phi({x}) against the integral of the density"
