import math
from fractions import Fraction

import pytest

from tropiso.core import TropVector
from tropiso.kernel import e_x_vector, range_membership, strict_trop_monotone
from tropiso.metrics import (
    WeakMetric,
    dirac_kernel,
    from_metric,
    from_weak_metric,
    funk_weak_metric,
    hilbert_metric,
    inner_product_kernel,
    metric_from_graph,
    semiconvex_kernel,
)

H = Fraction(1, 2)
Q = Fraction(1, 4)
LOG_EXACT = [(H, Q, Q), (Q, H, Q), (Q, Q, H)]


class TestWeakMetric:
    def test_axioms_are_enforced(self):
        with pytest.raises(ValueError, match="not 0"):
            WeakMetric.from_rows([[1, 1], [1, 0]])
        with pytest.raises(ValueError, match="triangle"):
            WeakMetric.from_rows([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        with pytest.raises(ValueError, match="symmetrization"):
            WeakMetric.from_rows([[0, 1], [-1, 0]])

    def test_asymmetric_negative_values_allowed(self):
        d = WeakMetric.from_rows([[0, -1], [2, 0]])
        assert d("1", "2") == -1 and not d.is_symmetric()
        assert d.symmetrized().delta == ((0, 1), (1, 0))


class TestGraphMetric:
    def test_three_cycle(self):
        d = metric_from_graph([("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
        assert d.delta == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
        assert all(isinstance(x, Fraction) for row in d.delta for x in row)

    def test_shortest_paths(self):
        d = metric_from_graph([("a", "b", "1/2"), ("b", "c", "1/3"), ("a", "c", 5)])
        assert d("a", "c") == Fraction(5, 6)

    def test_disconnected(self):
        with pytest.raises(ValueError, match="disconnected"):
            metric_from_graph([("a", "b", 1)], points=("a", "b", "c"))

    def test_bad_weight(self):
        with pytest.raises(ValueError):
            metric_from_graph([("a", "b", 0)])


class TestFromMetric:
    def test_two_points(self):
        d = WeakMetric.from_rows([[0, 1], [1, 0]])
        assert from_metric(d, 1).entries == ((0, -1), (-1, 0))

    def test_exact_root(self):
        d = WeakMetric.from_rows([[0, 4, Fraction(9, 4)], [4, 0, 4], [Fraction(9, 4), 4, 0]])
        B = from_metric(d, Fraction(1, 2))
        assert B.is_exact() and B.entry("1", "3") == Fraction(-3, 2)

    def test_inexact_root_falls_back_to_floats(self):
        d = WeakMetric.from_rows([[0, 2], [2, 0]])
        B = from_metric(d, Fraction(1, 2))
        assert not B.is_exact()
        assert math.isclose(B.entry("1", "2"), -math.sqrt(2))
        assert strict_trop_monotone(B)

    def test_rejects(self):
        d = WeakMetric.from_rows([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            from_metric(d, 2)
        with pytest.raises(ValueError):
            from_metric(WeakMetric.from_rows([[0, 1], [2, 0]]))


class TestWeakMetricKernel:
    def test_range_is_nonexpansive_maps(self):
        d = WeakMetric.from_rows([[0, -1, 1], [2, 0, 2], [1, -1, 0]])
        B = from_weak_metric(d)
        for x in d.points:
            e = e_x_vector(B, x)
            assert e == TropVector(d.points, tuple(d(z, x) for z in d.points))
        f = TropVector(d.points, (Fraction(0), Fraction(1), Fraction(0)))
        assert d.is_nonexpansive(f) == range_membership(B, f)
        g = TropVector(d.points, (Fraction(0), Fraction(-5), Fraction(0)))
        assert not d.is_nonexpansive(g) and not range_membership(B, g)


class TestFunk:
    def test_float_value(self):
        d = funk_weak_metric([(H, H), (Q, Fraction(3, 4))])
        assert d.approximate
        assert math.isclose(d("1", "2"), math.log(1.5))
        assert d("1", "1") == 0

    def test_log_exact(self):
        d = funk_weak_metric(LOG_EXACT, base=2)
        assert d.delta == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
        assert not d.approximate
        hm = hilbert_metric(LOG_EXACT, base=2)
        assert hm.is_symmetric() and hm("1", "2") == 2

    def test_log_exact_rejects_other_ratios(self):
        with pytest.raises(ValueError, match="power"):
            funk_weak_metric([(H, H), (Q, Fraction(3, 4))], base=2)

    def test_input_validation(self):
        with pytest.raises(ValueError, match="nonpositive"):
            funk_weak_metric([(0, 1), (H, H)])
        with pytest.raises(ValueError, match="linear-form"):
            funk_weak_metric([(1, 1)])

    def test_hilbert_symmetrization_is_metric(self):
        pts = [(H, Q, Q), (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), (Q, Fraction(5, 8), Fraction(1, 8))]
        d = funk_weak_metric(pts)
        s = d.symmetrized()
        n = len(pts)
        for i in range(n):
            for j in range(n):
                assert (s.delta[i][j] > 0) == (i != j)


class TestOtherFactories:
    def test_inner_product(self):
        B = inner_product_kernel([(1, 2), (0, 1)], [(3, 0)])
        assert B.entries == ((3,), (0,))

    def test_semiconvex(self):
        B = semiconvex_kernel([0, 1], 2)
        assert B.entries == ((0, -1), (-1, 0))
        with pytest.raises(ValueError):
            semiconvex_kernel([0, 1], 0)

    def test_dirac(self):
        B = dirac_kernel(("a", "b"))
        assert B.entry("a", "a") == 0 and B.entry("a", "b") == float("-inf")
