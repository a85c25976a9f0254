import math

import pytest
from scipy.special import expn

from cremjax.core.phases import SQRT2
from cremjax.core.xi_measure import (
    XI,
    CompactField,
    QuadratureSpec,
    bump_field,
    expected_zero_count,
    laplacian_consistency,
    xi_integrate,
)
from cremjax.errors import MeshTooCoarseError, SupportError
from cremjax.types import GridSpec


class TestXiIntegrate:

    @classmethod
    def setup_class(cls):
        cls.quad = QuadratureSpec(area_nodes=128)

    def test_b1_bump_is_null(self):
        result = xi_integrate(bump_field(0.1 + 0.1j, 0.2), self.quad)
        assert abs(result.value) < 1e-12, f"Xi has no mass in B1, got {result.value}"

    def test_b3_bump_is_twice_its_integral(self):
        f = bump_field(0.0 + 1.8j, 0.3)
        result = xi_integrate(f, self.quad)
        assert result.components["arcs"] == 0.0 and result.components["segments"] == 0.0, (
            f"A bump inside B3 only sees the area part, got {result.components}"
        )
        # the bump integrates to r^2 pi e E_2(1) over its disk
        reference = 2.0 * 0.3**2 * math.pi * math.e * expn(2, 1.0)
        assert result.value == pytest.approx(reference, rel=1e-3), f"Xi(f) = {result.value}, expected {reference}"

    def test_masses(self):
        assert XI.total_arc_length() == pytest.approx(math.pi), "The two arcs have total length pi"
        assert XI.segment_mass() == pytest.approx(0.5), "Each B1|B2 segment carries Xi-mass 1/2"

    def test_expected_zero_count(self):
        f = bump_field(0.0 + 1.8j, 0.3)
        n = 10.0
        value = expected_zero_count(f, n, self.quad)
        assert value == pytest.approx(n * xi_integrate(f, self.quad).value / (2 * math.pi)), "n Xi(f) / (2 pi)"


class TestLaplacianConsistency:

    def test_b3_bump(self):
        f = bump_field(0.2 + 1.5j, 0.25)
        grid = GridSpec(-0.1, 0.5, 1.2, 1.8, 1.0 / 128)
        lhs, rhs = laplacian_consistency(grid, f)
        assert lhs == pytest.approx(rhs, rel=0.02), f"Green identity fails in B3: {lhs} vs {rhs}"

    def test_arc_bump(self):
        f = bump_field(0.0 + 1.0j, 0.2)
        grid = GridSpec(-0.3, 0.3, 0.7, 1.3, 1.0 / 128)
        lhs, rhs = laplacian_consistency(grid, f)
        assert lhs == pytest.approx(rhs, rel=0.02), f"Green identity fails on the arc: {lhs} vs {rhs}"

    def test_segment_bump(self):
        center = complex(1.0, SQRT2 - 1.0)
        f = bump_field(center, 0.1)
        grid = GridSpec(0.85, 1.15, 0.25, 0.55, 1.0 / 256)
        lhs, rhs = laplacian_consistency(grid, f)
        assert lhs == pytest.approx(rhs, rel=0.02), f"Green identity fails on the segment: {lhs} vs {rhs}"

    def test_errors(self):
        f = bump_field(0.0 + 1.0j, 0.2)
        with pytest.raises(SupportError):
            laplacian_consistency(GridSpec(0.0, 0.3, 0.7, 1.3, 0.01), f)
        with pytest.raises(MeshTooCoarseError):
            laplacian_consistency(GridSpec(-0.5, 0.5, 0.5, 1.5, 0.1), f)

    def test_field_algebra(self):
        f = bump_field(0.0 + 1.0j, 0.2) + bump_field(0.5 + 1.0j, 0.1)
        assert isinstance(f, CompactField), "The sum of two fields is a field"
        assert f.support.to_tuple() == pytest.approx((-0.2, 0.6, 0.8, 1.2)), f"The support of a sum is the bounding box, got {f.support}"
        assert f(0.0 + 1.0j) == pytest.approx(1.0), "The bump peaks at 1 in its center"
