"""Built-in worked examples, run as executable checks.

The matrices live in :data:`PAPER_MATRICES` so a harness can corrupt one
and watch the corresponding check fail.
"""
from __future__ import annotations

from typing import Callable, List, Tuple

from .core import POS_INF, TropVector, difference, hilbert_seminorm, pointwise_sup
from .irreducible import essential_columns, essential_rows, fully_reduced, refute_inf_irreducible, relative_inf
from .isophi import (
    AffineReparam,
    IsoSpec,
    decompose_iso,
    dual_value,
    find_kernel_conjugacy,
    hilbert_obstruction,
    hilbert_profile,
    is_max_plus_iso,
    primal_value,
    push_through_generators,
)
from .kernel import Kernel, conjugate, e_x_vector, project, range_membership, transpose_conjugate
from .metrics import dirac_kernel, from_metric, metric_from_graph

PAPER_MATRICES = {
    "A": [[0, -2, 0], [-2, 0, 0], [0, 0, 0]],
    "B": [[0, -1, 0], [-3, 0, 0], [0, 0, 0]],
    "C": [[0, -2], [-2, 0]],
    "D": [[0, -1], [-3, 0]],
    "dual_B": [[0, -1, 0], [-1, 0, 0], [0, 0, 0]],
    "dual_C": [[0, -1], [-1, 0], [0, 0]],
}


def kernel(name: str) -> Kernel:
    return Kernel.from_rows(PAPER_MATRICES[name])


def _v(*vals, points=None) -> TropVector:
    points = points or tuple(str(i + 1) for i in range(len(vals)))
    return TropVector.parse(points, vals)


def _eq(got, want) -> Tuple[bool, str]:
    return got == want, f"got {got}, expected {want}"


def check_seminorms():
    A, B = kernel("A"), kernel("B")
    got = (hilbert_seminorm(difference(A.column("1"), A.column("2"))),
           hilbert_seminorm(difference(B.column("2"), B.column("3"))))
    return _eq(got, (4, 1))


def check_profiles():
    A, B = kernel("A"), kernel("B")
    got = (hilbert_profile(A, full=True), hilbert_profile(B, full=True), hilbert_obstruction(A, B))
    return _eq(got, ((4, 2, 2), (4, 3, 1), True))


def check_third_column_is_sup():
    A = kernel("A")
    return _eq(pointwise_sup([A.column("1"), A.column("2")]), A.column("3"))


def check_third_column_is_relative_inf():
    A = kernel("A")
    got = (relative_inf(A, [_v(1, 0, 1), _v(0, 1, 1)]), project(A, _v(0, 0, 1)))
    return _eq(got, (A.column("3"), A.column("3")))


def check_redundancy():
    A = kernel("A")
    cols, rows = essential_columns(A), essential_rows(A)
    got = (cols.essential_columns, cols.redundant_columns.get("3"), rows.redundant_columns.get("3"),
           fully_reduced(A))
    want = (("1", "2"), _v(0, 0), _v(0, 0), False)
    return _eq(got, want)


def check_inf_refuter():
    A = kernel("A")
    return _eq(refute_inf_irreducible(A, A.column("3")), (_v(1, 0, 1), _v(0, 1, 1)))


def check_transpose_of_e_x():
    A = kernel("A")
    e1 = e_x_vector(A, "1")
    return _eq((e1, transpose_conjugate(A, e1)), (_v(0, 2, 2), A.row("1")))


def check_range_of_C():
    C = kernel("C")
    got = (range_membership(C, _v(0, 3)), range_membership(C, _v(0, 2)), range_membership(C, _v(0, -2)))
    return _eq(got, (False, True, True))


def check_translation_iso():
    C, D = kernel("C"), kernel("D")
    shift = AffineReparam(_v(0, -1), {"1": "1", "2": "2"})
    ident = AffineReparam.identity(("1", "2"))
    return _eq((is_max_plus_iso(C, D, shift), is_max_plus_iso(C, D, ident)), (True, False))


def check_conjugacy_C_D():
    C, D = kernel("C"), kernel("D")
    cert = find_kernel_conjugacy(C, D)
    if cert is None:
        return False, "no certificate found"
    return cert.verify(C, D) and is_max_plus_iso(C, D, cert.as_iso()), f"certificate {cert.psi}, {cert.varphi}"


def check_no_column_iso_A_B():
    A, B = kernel("A"), kernel("B")
    # send A's columns to B's columns; the sup relation forces the third image
    spec = IsoSpec({"1": B.column("1"), "2": B.column("2").shift(-1),
                    "3": pointwise_sup([B.column("1"), B.column("2").shift(-1)])})
    return _eq(decompose_iso(A, B, spec), None)


def check_embedding_C_into_A():
    A, C = kernel("A"), kernel("C")
    src = Kernel(C.x_points, ("1", "2"), C.entries)
    dst = A.restrict_columns(("1", "2"))
    imgs = tuple(push_through_generators(src, dst, C.column(y)) for y in ("1", "2"))
    f = _v(0, 1)
    back = push_through_generators(src, dst, f)
    restricted = TropVector(("1", "2"), back.values[:2])
    return _eq((imgs, restricted), ((A.column("1"), A.column("2")), f))


def check_dual_values():
    B3, B2 = kernel("dual_B"), kernel("dual_C")
    z = _v(0, 0, 0)
    got = (dual_value(B3, z, z), dual_value(B2, z, z), primal_value(z, z))
    return _eq(got, (0, -1, 0))


def check_metric_e_x():
    d = metric_from_graph([("a", "b", 1), ("b", "c", 2)])
    B = from_metric(d)
    got = [e_x_vector(B, x) for x in d.points]
    want = [TropVector(d.points, tuple(d(z, x) for z in d.points)) for x in d.points]
    return _eq(got, want)


def check_dirac_e_x():
    B = dirac_kernel(("1", "2", "3"))
    got = [e_x_vector(B, x) for x in B.x_points]
    want = [TropVector(B.x_points, tuple(0 if z == x else POS_INF for z in B.x_points)) for x in B.x_points]
    return _eq(got, want)


def check_columns_from_dirac_tops():
    A = kernel("A")
    got = [conjugate(A, TropVector(A.y_points, tuple(0 if z == y else POS_INF for z in A.y_points)))
           for y in A.y_points]
    return _eq(got, A.columns())


CHECKS: List[Tuple[str, Callable]] = [
    ("hilbert seminorms of column differences", check_seminorms),
    ("hilbert profiles of A and B", check_profiles),
    ("third column of A is the sup of the first two", check_third_column_is_sup),
    ("third column of A is a relative inf", check_third_column_is_relative_inf),
    ("third column and row of A are redundant", check_redundancy),
    ("inf refuter finds the witness pair", check_inf_refuter),
    ("transpose conjugate of e_1 is the first row", check_transpose_of_e_x),
    ("range of C is the band |x2 - x1| <= 2", check_range_of_C),
    ("translation maps Rg(C) onto Rg(D)", check_translation_iso),
    ("conjugacy search on C and D", check_conjugacy_C_D),
    ("no column-matching isomorphism from Rg(A) to Rg(B)", check_no_column_iso_A_B),
    ("columns of C extend to an embedding into Rg(A)", check_embedding_C_into_A),
    ("dual value depends on the generating kernel", check_dual_values),
    ("metric kernel has e_x = d(., x)", check_metric_e_x),
    ("Dirac kernel has e_x = top Dirac masses", check_dirac_e_x),
    ("conjugating top Dirac masses gives the columns", check_columns_from_dirac_tops),
]


def run_checks():
    """``(name, ok, detail)`` for every check, in a fixed order."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a corrupted matrix may break a precondition
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
