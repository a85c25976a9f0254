import cmath
import math

import numpy as np
import pytest
from scipy import integrate, stats

from cremjax.errors import SaddleRegimeError
from cremjax.specfun.moments import (
    PLUS_INFINITY,
    SaddleRegime,
    log_saddle_asymptotic,
    log_saddle_exact,
    log_truncated_exp_moment,
    saddle_bounds_check,
    truncated_exp_moment,
    truncated_exp_moment_bivariate,
    upper_truncated_exp_moment,
)


def truncated_moment_oracle(w: complex, a: float) -> complex:
    """E[e^{wX} 1_{X<a}] by adaptive quadrature of the real and imaginary parts."""
    integrand = lambda x: cmath.exp(w * x - x * x / 2) / math.sqrt(2 * math.pi)
    re, _ = integrate.quad(lambda x: integrand(x).real, -math.inf, a, epsabs=0, epsrel=1e-13, limit=400)
    im, _ = integrate.quad(lambda x: integrand(x).imag, -math.inf, a, epsabs=0, epsrel=1e-13, limit=400)
    return complex(re, im)


class TestTruncatedMoment:

    @classmethod
    def setup_class(cls):
        cls.ws = [0.5, -1.2, 2.0 + 0.5j, 1.0 - 1.5j, -0.7 + 2.0j, 3.0 + 3.0j]
        cls.levels = [-2.0, 0.0, 1.5, 3.5]

    def test_against_quadrature(self):
        for w in self.ws:
            for a in self.levels:
                value = truncated_exp_moment(w, a)
                expected = truncated_moment_oracle(complex(w), a)
                # the modulus moment bounds the integrand, cancellation is measured against it
                scale = truncated_moment_oracle(complex(complex(w).real), a).real
                assert abs(value - expected) <= 1e-8 * scale, f"E[e^(wX) 1(X<a)] at w={w}, a={a}: {value} vs {expected}"

    def test_no_truncation(self):
        for w in self.ws:
            assert truncated_exp_moment(w, PLUS_INFINITY) == pytest.approx(cmath.exp(complex(w) ** 2 / 2), rel=1e-14), (
                f"Without truncation the moment is e^(w^2/2) at w={w}"
            )

    def test_split(self):
        for w in self.ws:
            for a in self.levels:
                total = truncated_exp_moment(w, a) + upper_truncated_exp_moment(w, a)
                assert total == pytest.approx(cmath.exp(complex(w) ** 2 / 2), rel=1e-9), (
                    f"Lower and upper parts must add up to e^(w^2/2) at w={w}, a={a}"
                )

    def test_infinite_level_is_refused(self):
        with pytest.raises(ValueError):
            truncated_exp_moment(1.0, math.inf)

    def test_log_space_beyond_overflow(self):
        value = log_truncated_exp_moment(40.0 + 1.0j, 10.0)
        assert math.isfinite(value.real), f"The log moment must stay finite, got {value}"

    def test_bivariate(self):
        # with rho = 1 the bivariate moment is the univariate one at s beta
        s, sigma, tau, a = 1.3, 0.8, 0.6, 0.5
        value = truncated_exp_moment_bivariate(s, sigma, tau, 1.0, a)
        assert value == pytest.approx(truncated_exp_moment(s * complex(sigma, tau), a), rel=1e-13), "rho = 1 case"
        # with rho = 0 the phase part factors out as e^{-s^2 tau^2 / 2}
        value = truncated_exp_moment_bivariate(s, sigma, tau, 0.0, a)
        expected = math.exp(-s * s * tau * tau / 2) * truncated_exp_moment(s * sigma, a)
        assert value == pytest.approx(expected, rel=1e-13), "rho = 0 case"


class TestSaddle:

    @staticmethod
    def a_seq(n):
        return math.sqrt(2.0) - math.log(4 * math.pi * n) / (2 * math.sqrt(2.0) * n)

    def test_regimes(self):
        a = math.sqrt(2.0)
        assert log_saddle_asymptotic(0.5 + 0.3j, self.a_seq, 100, a_limit=a)[1] == SaddleRegime.SaddleDominated
        assert log_saddle_asymptotic(2.0 + 0.3j, self.a_seq, 100, a_limit=a)[1] == SaddleRegime.BoundaryDominated
        assert log_saddle_asymptotic(1.2 + 0.5j, self.a_seq, 100, a_limit=a)[1] == SaddleRegime.TwoTerm

    def test_saddle_dominated_is_sharp(self):
        w = 0.5 + 0.3j
        for n in (100, 400):
            approx, _ = log_saddle_asymptotic(w, self.a_seq, n, a_limit=math.sqrt(2.0))
            exact = log_saddle_exact(w, self.a_seq, n)
            assert abs(cmath.exp(approx - exact) - 1.0) < 1e-6, f"Saddle term off at n={n}: {approx} vs {exact}"

    def test_boundary_accuracy_improves(self):
        w = 2.0 + 0.3j
        errors = []
        for n in (100, 400, 1600):
            approx, _ = log_saddle_asymptotic(w, self.a_seq, n, a_limit=math.sqrt(2.0))
            exact = log_saddle_exact(w, self.a_seq, n)
            errors.append(abs(cmath.exp(approx - exact) - 1.0))
        assert errors[1] < 0.05, f"Relative error {errors[1]} at n=400"
        assert errors[2] < errors[1] < errors[0], f"Errors must decrease with n, got {errors}"

    def test_critical(self):
        with pytest.raises(SaddleRegimeError):
            log_saddle_asymptotic(1.0 + 0.5j, lambda n: 1.5, 100)
        value, regime = log_saddle_asymptotic(1.5, lambda n: 1.5, 100, critical_c=0.0)
        assert regime == SaddleRegime.CriticalReal, f"Expected the critical regime, got {regime}"
        assert value.real == pytest.approx(1.5**2 * 100 / 2 + math.log(0.5)), "Phi(0) e^(w^2 n/2)"
        # a constant sequence resolves to c = 0 on its own
        value_inferred, regime = log_saddle_asymptotic(1.5, lambda n: 1.5, 100)
        assert regime == SaddleRegime.CriticalReal and value_inferred == pytest.approx(value)

    def test_critical_limit_is_extrapolated(self):
        n = 1e4
        a_seq = lambda m: 1.0 + 0.7 / math.sqrt(m)
        value, regime = log_saddle_asymptotic(1.0, a_seq, n)
        assert regime == SaddleRegime.CriticalReal, f"a(n) -> 1 = w is the critical case, got {regime}"
        assert value.real - n / 2 == pytest.approx(math.log(stats.norm.cdf(0.7)), abs=1e-9), "Phi(0.7) e^(n/2)"
        exact = log_saddle_exact(1.0, a_seq, n)
        assert abs(cmath.exp(value - exact) - 1.0) < 1e-6, f"{value} vs exact {exact}"
        # the same sequence with its limit given explicitly
        value_given, regime = log_saddle_asymptotic(1.0, a_seq, n, a_limit=1.0)
        assert regime == SaddleRegime.CriticalReal and value_given == pytest.approx(value)

    def test_bounds(self):
        bound_lower, nan_upper = saddle_bounds_check(2.0, 1.0)
        assert np.isnan(nan_upper) and bound_lower == pytest.approx(math.exp(1.5)), "e^(aw - a^2/2) for w > a"
        assert truncated_exp_moment(2.0, 1.0).real <= bound_lower, "The lower moment is dominated by the bound"
        with pytest.raises(ValueError):
            saddle_bounds_check(1.0, 1.0)
