import cmath
import math

import pytest

from cremjax.core.phases import limit_p
from cremjax.errors import PlanError
from cremjax.fluct.plans import (
    LOG_ZERO,
    CaseTag,
    Centering,
    LimitKind,
    classify_case,
    conjugate_plan,
    log_ratio,
    log_truncated_center,
    make_plan,
    plan_log_scale,
)
from cremjax.partition.evaluation import compute_bn
from cremjax.specfun.moments import log_truncated_exp_moment_bivariate

SQRT2 = math.sqrt(2.0)


class TestCases:

    def test_case_tags(self):
        expected = {
            0.3 + 0.4j: CaseTag.C1a,
            0.3 + 1.2j: CaseTag.C1b,
            complex(math.sqrt(0.5), 0.3): CaseTag.C1crit,
            1.2 + 0.5j: CaseTag.C2a,
            1.0 + 0.2j: CaseTag.C2b,
            complex(1.0, SQRT2 - 1.0): CaseTag.C2c,
        }
        for beta, tag in expected.items():
            assert classify_case(beta) == tag, f"{beta} should be {tag.value}, got {classify_case(beta).value}"
            assert classify_case(-beta) == tag and classify_case(beta.conjugate()) == tag, "Tags are symmetric"


class TestPlans:

    @classmethod
    def setup_class(cls):
        cls.n = 10.0

    def test_c1a(self):
        sigma, tau, rho = 0.3, 0.4, 0.5
        plan = make_plan(complex(sigma, tau), rho, self.n)
        assert plan.case_tag == CaseTag.C1a and plan.centering == Centering.power
        assert plan.log_m == pytest.approx(self.n * complex(1 + (sigma**2 - tau**2) / 2, sigma * tau * rho))
        assert plan.log_v == pytest.approx(self.n * (0.5 + sigma**2))
        assert plan.limit.kind == LimitKind.ComplexGaussian and plan.limit.variance == 1.0

    def test_c1crit(self):
        plan = make_plan(complex(math.sqrt(0.5), 0.3), 1.0, self.n)
        assert plan.limit.variance == 0.5 and plan.log_v == pytest.approx(self.n)

    def test_real_case_is_out_of_scope(self):
        assert make_plan(0.3, 1.0, self.n).limit.kind == LimitKind.OutOfScopeRealCase
        assert make_plan(1.2, 0.5, self.n).limit.kind == LimitKind.OutOfScopeRealCase

    def test_log_scale_matches_limit(self):
        for beta in (0.3 + 0.4j, 0.3 + 1.2j, 0.5 + 0.2j):
            plan = make_plan(beta, 1.0, self.n)
            assert plan_log_scale(plan) == pytest.approx(limit_p(beta)), f"Scale of the plan at {beta}"

    def test_stable_plan(self):
        beta, rho = 1.2 + 0.5j, 0.5
        plan = make_plan(beta, rho, self.n)
        assert plan.limit.kind == LimitKind.IsotropicStable
        assert plan.limit.alpha == pytest.approx(SQRT2 / 1.2)
        assert plan.log_v == pytest.approx(1.2 * math.sqrt(self.n) * compute_bn(self.n))
        assert plan.centering == Centering.truncated
        expected = self.n + log_truncated_exp_moment_bivariate(math.sqrt(self.n), 1.2, 0.5, rho, compute_bn(self.n))
        assert plan.log_m == pytest.approx(expected)
        assert log_truncated_center(beta, rho, self.n) == pytest.approx(expected)
        power = make_plan(beta, rho, self.n, centering="power")
        assert power.log_m == LOG_ZERO and power.m_N == 0j

    def test_zeta_plans(self):
        beta = 1.6 + 0.8j
        plan = make_plan(beta, 1.0, self.n)
        assert plan.limit.kind == LimitKind.ZetaP and plan.limit.tilde
        assert plan.limit.argument == pytest.approx(beta / SQRT2)
        assert plan.log_v == pytest.approx(beta * math.sqrt(self.n) * compute_bn(self.n))
        anti = make_plan(beta, -1.0, self.n)
        assert anti.limit.conjugate and anti.limit.argument == pytest.approx(beta.conjugate() / SQRT2)
        assert not make_plan(beta, 1.0, self.n, centering=Centering.power).limit.tilde

    def test_plan_error(self):
        with pytest.raises(PlanError):
            make_plan(SQRT2, 1.0, self.n, centering="power")
        with pytest.raises(PlanError):
            make_plan(complex(SQRT2, 0.0), -1.0, self.n)
        assert make_plan(complex(SQRT2, 0.5), 1.0, self.n).case_tag == CaseTag.C2a

    def test_mirrored(self):
        plan = make_plan(-0.3 - 0.4j, 0.5, self.n)
        reference = make_plan(0.3 + 0.4j, 0.5, self.n)
        assert plan.mirrored and not reference.mirrored
        assert plan.beta.beta == -0.3 - 0.4j
        assert plan.log_m == reference.log_m and plan.log_v == reference.log_v

    def test_conjugate(self):
        plan = make_plan(1.6 + 0.8j, 1.0, self.n)
        conj = conjugate_plan(plan)
        assert conj.beta.beta == 1.6 - 0.8j and conj.rho == plan.rho
        assert conj.log_m == plan.log_m.conjugate() and conj.log_v == plan.log_v.conjugate()
        assert conj.limit.argument == plan.limit.argument.conjugate()

    def test_to_dict(self):
        record = make_plan(0.3 + 0.4j, 1.0, self.n).to_dict()
        assert record["case_tag"] == "C1a" and record["limit"]["kind"] == "ComplexGaussian"


class TestLogRatio:

    def test_values(self):
        assert log_ratio(LOG_ZERO, 3.0 + 0j) == 0j
        assert log_ratio(complex(math.log(6.0), 0.5), complex(math.log(2.0), 0.0)) == pytest.approx(3.0 * cmath.exp(0.5j))
        # ratios of numbers far beyond double range
        assert log_ratio(complex(2000.0, 0.0), complex(1999.0, 0.0)) == pytest.approx(math.e)
