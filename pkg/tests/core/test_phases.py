import math

import numpy as np
import pytest

from cremjax.core.phases import (
    SQRT2,
    SQRT_HALF,
    classify,
    compare_at_resolution,
    limit_p,
    limit_p_grid,
    region_formulas,
)
from cremjax.types import ComplexParam, PhaseLabel


class TestClassify:

    @classmethod
    def setup_class(cls):
        cls.cases = {
            (0.2, 0.2): PhaseLabel.B1,
            (0.3, 1.5): PhaseLabel.B3,
            (1.2, 1.0): PhaseLabel.B2,
            (1.0, 0.2): PhaseLabel.B1,
            (0.0, 1.0): PhaseLabel.Boundary13,
            (0.6, 0.8): PhaseLabel.Boundary13,
            (1.0, SQRT2 - 1.0): PhaseLabel.Boundary12,
            (SQRT_HALF, 1.2): PhaseLabel.Boundary23,
            (SQRT_HALF, SQRT_HALF): PhaseLabel.TriplePoint,
        }

    def test_labels(self):
        for (sigma, tau), expected in self.cases.items():
            label = classify(ComplexParam(sigma=sigma, tau=tau))
            assert label == expected, f"classify({sigma}, {tau}) = {label}, expected {expected}"

    def test_symmetries(self):
        for (sigma, tau), expected in self.cases.items():
            for s, t in ((-sigma, tau), (sigma, -tau), (-sigma, -tau)):
                label = classify(complex(s, t))
                assert label == expected, f"classify({s}, {t}) = {label} breaks the symmetry, expected {expected}"

    def test_resolution(self):
        assert compare_at_resolution(1.0, 1.0 + 1e-16) == 0, "Values one ulp apart must compare equal"
        assert compare_at_resolution(1.0, 1.0 + 1e-12) == -1, "Values 1e-12 apart must be ordered"
        assert classify(complex(SQRT_HALF + 1e-9, 1.2)) == PhaseLabel.B2, "A point 1e-9 right of sigma = 1/sqrt 2 is in B2"


class TestLimitP:

    def test_values(self):
        assert limit_p(0j) == pytest.approx(1.0), "p(0) = 1"
        assert limit_p(complex(0.0, 1.0)) == pytest.approx(0.5), "p(i) = 1/2 on the B1|B3 arc"
        assert limit_p(complex(0.3, 1.5)) == pytest.approx(0.5 + 0.09), "p = 1/2 + sigma^2 in B3"
        assert limit_p(complex(1.2, 1.0)) == pytest.approx(SQRT2 * 1.2), "p = sqrt 2 |sigma| in B2"
        assert limit_p(complex(0.2, 0.3)) == pytest.approx(1.0 + 0.5 * (0.04 - 0.09)), "p in B1"

    def test_boundary_formulas_agree(self):
        for beta in (complex(0.6, 0.8), complex(1.0, SQRT2 - 1.0), complex(SQRT_HALF, SQRT_HALF)):
            values = region_formulas(beta)
            assert len(values) >= 2, f"{beta} is a boundary point, got formulas {values}"
            spread = max(values.values()) - min(values.values())
            assert spread < 1e-12, f"Closure formulas disagree at {beta}: {values}"

    def test_grid_matches_pointwise(self):
        sigma_axis = np.linspace(-2, 2, 17)
        tau_axis = np.linspace(-2, 2, 13)
        grid = limit_p_grid(sigma_axis, tau_axis)
        for i, s in enumerate(sigma_axis):
            for j, t in enumerate(tau_axis):
                expected = limit_p(complex(s, t))
                assert math.isclose(grid[i, j], expected, abs_tol=1e-12), f"limit_p_grid differs at ({s}, {t})"

    def test_continuity(self):
        # p is continuous across every boundary
        for beta in (complex(0.6, 0.8), complex(1.0, SQRT2 - 1.0), complex(SQRT_HALF, 1.2)):
            for offset in (1e-7, -1e-7, 1e-7j, -1e-7j):
                diff = abs(limit_p(beta + offset) - limit_p(beta))
                assert diff < 1e-6, f"p jumps by {diff} next to {beta}"
