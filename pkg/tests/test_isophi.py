import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_kernel

from tropiso.core import NEG_INF, TropVector, difference, hilbert_seminorm, pointwise_sup
from tropiso.irreducible import fully_reduced
from tropiso.isophi import (
    AffineReparam,
    IsoSpec,
    IsoSpecError,
    NotFullyReducedError,
    SizeCapError,
    apply_iso,
    decompose_iso,
    dual_value,
    find_kernel_conjugacy,
    hilbert_obstruction,
    hilbert_profile,
    invert_iso,
    is_max_plus_iso,
    iso_spec_from_affine,
    primal_value,
    push_through_generators,
    verify_iso_spec,
)
from tropiso.kernel import Kernel, combine, conjugate, project, range_membership
from tropiso.metrics import dirac_kernel, from_metric, metric_from_graph


def v(*vals, points=None):
    return TropVector.parse(points or tuple(str(i + 1) for i in range(len(vals))), vals)


IDENT2 = {"1": "1", "2": "2"}
seeds = st.integers(min_value=0, max_value=10 ** 6)


def random_affine(rng, src):
    tgt = tuple(f"t{k}" for k in range(len(src)))
    perm = list(src)
    rng.shuffle(perm)
    g = TropVector(tgt, tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in tgt))
    return AffineReparam(g, dict(zip(tgt, perm)))


class TestAffine:
    def test_identity_and_scalars(self):
        f = v(3, "-inf", 1)
        J = AffineReparam.identity(f.points)
        assert apply_iso(J, f) == f
        K = AffineReparam(v(1, 2, 3), {"1": "3", "2": "1", "3": "2"})
        assert apply_iso(K, f.shift(2)) == apply_iso(K, f).shift(2)
        assert apply_iso(K, f) == v(2, 5, "-inf")

    def test_translation_on_C(self, paper):
        C, D = paper("C"), paper("D")
        J = AffineReparam(v(0, -1), IDENT2)
        for c in C.columns():
            assert range_membership(D, apply_iso(J, c))

    def test_inverse(self):
        J = AffineReparam(v(0, -1), IDENT2)
        assert invert_iso(J) == AffineReparam(v(0, 1), IDENT2)
        ident = AffineReparam.identity(("a", "b"))
        assert invert_iso(ident) == ident

    def test_validation(self):
        with pytest.raises(ValueError):
            AffineReparam(v(0, "-inf"), IDENT2)
        with pytest.raises(ValueError):
            AffineReparam(v(0, 0), {"1": "1", "2": "1"})

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_round_trip_and_sup(self, seed):
        rng = random.Random(seed)
        src = tuple(f"s{k}" for k in range(rng.randint(1, 6)))
        J = random_affine(rng, src)
        f = TropVector(src, tuple(Fraction(rng.randint(-5, 5)) for _ in src))
        g = TropVector(src, tuple(Fraction(rng.randint(-5, 5)) for _ in src))
        assert apply_iso(invert_iso(J), apply_iso(J, f)) == f
        assert apply_iso(J, pointwise_sup([f, g])) == pointwise_sup([apply_iso(J, f), apply_iso(J, g)])
        assert hilbert_seminorm(difference(apply_iso(J, f), apply_iso(J, g))) == \
            hilbert_seminorm(difference(f, g))


class TestIsMaxPlusIso:
    def test_examples(self, paper):
        C, D = paper("C"), paper("D")
        assert is_max_plus_iso(C, D, AffineReparam(v(0, -1), IDENT2))
        assert not is_max_plus_iso(C, D, AffineReparam.identity(("1", "2")))
        B = paper("B")
        assert is_max_plus_iso(B, B, AffineReparam.identity(B.x_points))

    def test_index_mismatch(self, paper):
        with pytest.raises(ValueError):
            is_max_plus_iso(paper("C"), paper("A"), AffineReparam.identity(("1", "2")))


class TestDecompose:
    def test_dirac_identity(self):
        B = dirac_kernel(("a", "b", "c"))
        J = AffineReparam.identity(B.x_points)
        assert decompose_iso(B, B, iso_spec_from_affine(B, J)) == J

    def test_A_to_B_has_no_affine_form(self, paper):
        A, B = paper("A"), paper("B")
        spec = IsoSpec({"1": v(0, -3, 0), "2": v(-2, -1, -1), "3": v(0, -1, 0)})
        verify_iso_spec(A, B, spec)
        assert decompose_iso(A, B, spec) is None

    def test_ill_defined_spec(self, paper):
        A = paper("A")
        # the third column is the sup of the first two, so its image must be too
        spec = IsoSpec({"1": A.column("1"), "2": A.column("2"), "3": A.column("3").shift(1)})
        with pytest.raises(IsoSpecError):
            decompose_iso(A, A, spec)

    def test_not_onto(self, paper):
        A = paper("A")
        spec = IsoSpec({y: A.column("3") for y in A.y_points})
        with pytest.raises(IsoSpecError):
            verify_iso_spec(A, A, spec)

    def test_missing_image(self, paper):
        with pytest.raises(IsoSpecError):
            verify_iso_spec(paper("C"), paper("C"), IsoSpec({"1": v(0, -2)}))

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_planted_round_trip(self, seed):
        rng = random.Random(seed)
        B_F = from_metric(metric_from_graph(
            [(str(k), str(rng.randrange(k)), rng.randint(1, 4)) for k in range(1, rng.randint(2, 5))]))
        J = random_affine(rng, B_F.x_points)
        tgt = J.g.points
        B_G = Kernel(tgt, B_F.y_points, tuple(
            tuple(J.g[x] + b for b in B_F.row(J.phi[x]).values) for x in tgt))
        assert decompose_iso(B_F, B_G, iso_spec_from_affine(B_F, J)) == J


class TestProfiles:
    def test_examples(self, paper):
        A, B = paper("A"), paper("B")
        assert hilbert_profile(A, full=True) == (4, 2, 2)
        assert hilbert_profile(B, full=True) == (4, 3, 1)
        assert hilbert_profile(A) == (4,)
        assert hilbert_obstruction(A, B)
        assert not hilbert_obstruction(B, B)

    def test_infinite_column(self):
        with pytest.raises(ValueError):
            hilbert_profile(dirac_kernel(("1", "2")), full=True)


def planted(rng, B):
    n, m = B.shape
    xs = tuple(f"p{k}" for k in range(n))
    ys = tuple(f"q{k}" for k in range(m))
    tau = dict(zip(xs, rng.sample(B.x_points, n)))
    sigma = dict(zip(ys, rng.sample(B.y_points, m)))
    psi = {x: Fraction(rng.randint(-5, 5)) for x in xs}
    phi = {y: Fraction(rng.randint(-5, 5)) for y in ys}
    return Kernel(xs, ys, tuple(tuple(psi[x] + B.entry(tau[x], sigma[y]) + phi[y] for y in ys) for x in xs))


class TestConjugacy:
    def test_C_D(self, paper):
        C, D = paper("C"), paper("D")
        cert = find_kernel_conjugacy(C, D)
        assert cert.tau == IDENT2 and cert.sigma == IDENT2
        assert cert.psi == v(0, -1) and cert.varphi == v(0, 1)
        assert cert.verify(C, D)

    def test_identity(self, paper):
        C = paper("C")
        cert = find_kernel_conjugacy(C, C)
        assert cert.psi == v(0, 0) and cert.varphi == v(0, 0)

    def test_errors(self, paper):
        with pytest.raises(NotFullyReducedError):
            find_kernel_conjugacy(paper("A"), paper("A"))
        with pytest.raises(ValueError, match="finite"):
            find_kernel_conjugacy(dirac_kernel(("1", "2")), paper("C"))
        big = Kernel.from_rows([[-abs(i - j) for j in range(10)] for i in range(10)])
        with pytest.raises(SizeCapError):
            find_kernel_conjugacy(big, big)
        assert find_kernel_conjugacy(big, big, allow_large=True) is not None

    def test_size_mismatch(self, paper):
        C = paper("C")
        E = Kernel.from_rows([[0, -1, -3], [-1, 0, -1], [-3, -1, 0]])
        assert fully_reduced(E)
        assert find_kernel_conjugacy(C, E) is None

    def test_deterministic(self):
        # symmetric kernel with a nontrivial automorphism: swap 1 and 3
        B = Kernel.from_rows([[0, -1, -3], [-1, 0, -1], [-3, -1, 0]])
        cert = find_kernel_conjugacy(B, B)
        assert cert.tau == {"1": "1", "2": "2", "3": "3"}

    def test_no_conjugacy(self, paper):
        C = paper("C")
        E = Kernel.from_rows([[0, -3], [-3, 0]])
        assert find_kernel_conjugacy(C, E) is None

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_planted_and_iso(self, seed):
        rng = random.Random(seed)
        while True:
            B = random_kernel(rng, max_rows=5, max_cols=5, lo=-9, hi=9, p_neg_inf=0)
            if fully_reduced(B):
                break
        C = planted(rng, B)
        cert = find_kernel_conjugacy(B, C)
        assert cert is not None and cert.verify(B, C)
        assert is_max_plus_iso(B, C, cert.as_iso())


class TestPushThrough:
    def test_C_into_A(self, paper):
        A, C = paper("A"), paper("C")
        dst = A.restrict_columns(("1", "2"))
        for j in ("1", "2"):
            assert push_through_generators(C, dst, C.column(j)) == A.column(j)
        f = v(1, 2)
        img = push_through_generators(C, dst, f)
        assert TropVector(("1", "2"), img.values[:2]) == f

    def test_same_kernel_is_identity(self, paper):
        C = paper("C")
        assert push_through_generators(C, C, v(0, 1)) == v(0, 1)

    def test_rejects(self, paper):
        with pytest.raises(ValueError):
            push_through_generators(paper("C"), paper("C"), v(0, 3))
        with pytest.raises(ValueError):
            push_through_generators(paper("C"), paper("A"), v(0, 0))


class TestDual:
    def test_counterexample(self, paper):
        z = v(0, 0, 0)
        assert dual_value(paper("dual_B"), z, z) == 0
        assert dual_value(paper("dual_C"), z, z) == -1
        assert primal_value(z, z) == 0

    def test_one_by_one(self):
        B = Kernel.from_rows([[0]])
        assert dual_value(B, v(2), v(3)) == 5 == primal_value(v(2), v(3))

    def test_warns_outside_range(self, paper):
        with pytest.warns(UserWarning):
            dual_value(paper("C"), v(0, 0), v(0, 3))

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_weak_duality(self, seed):
        rng = random.Random(seed)
        B = random_kernel(rng)
        f = TropVector(B.x_points, tuple(Fraction(rng.randint(-5, 5)) for _ in B.x_points))
        g = project(B, TropVector(B.x_points, tuple(Fraction(rng.randint(-5, 5)) for _ in B.x_points)))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert dual_value(B, f, g) <= primal_value(f, g)

    def test_same_range_same_value(self):
        # c(x, y') = phi(y') + b(x, sigma(y')): same range, affine isomorphisms only
        rng = random.Random(2)
        for _ in range(20):
            B = random_kernel(rng, max_rows=4, max_cols=4, p_neg_inf=0)
            ys = list(B.y_points)
            rng.shuffle(ys)
            shifts = [Fraction(rng.randint(-3, 3)) for _ in ys]
            C = Kernel(B.x_points, tuple(f"c{k}" for k in range(len(ys))), tuple(
                tuple(s + B.entry(x, y) for y, s in zip(ys, shifts)) for x in B.x_points))
            g = combine(B, tuple(Fraction(rng.randint(-4, 4)) for _ in B.y_points))
            assert project(C, g) == g
            assert all(project(B, c) == c for c in C.columns())
            f = TropVector(B.x_points, tuple(Fraction(rng.randint(-4, 4)) for _ in B.x_points))
            assert dual_value(B, f, g) == dual_value(C, f, g)

    def test_dirac_value_is_degenerate(self):
        B = dirac_kernel(("1", "2"))
        z = v(0, 0)
        assert dual_value(B, z, z) == NEG_INF < primal_value(z, z)


class TestAntiIsoComposition:
    def test_two_kernels_on_one_range(self):
        # b and b + c span the same range; B2 after B1 is the translation by c
        d = metric_from_graph([("1", "2", 1), ("2", "3", 2)])
        B1 = from_metric(d)
        B2 = Kernel(B1.x_points, B1.y_points, tuple(tuple(b + 3 for b in row) for row in B1.entries))
        rng = random.Random(9)
        for _ in range(10):
            f = combine(B1, tuple(Fraction(rng.randint(-3, 3)) for _ in range(3)))
            g = combine(B1, tuple(Fraction(rng.randint(-3, 3)) for _ in range(3)))
            J = lambda h: conjugate(B2, conjugate(B1, h))
            assert J(f) == f.shift(3)
            assert (f <= g) == (J(f) <= J(g))
