"""(max,+)-isomorphisms between kernel ranges.

An affine reparametrization ``Jf(x) = g(x) + f(phi(x))`` maps functions on
the ground set of a source kernel ``B_F`` to functions on the ground set of
a target kernel ``B_G``; ``phi`` goes from the target points to the source
points.  A general candidate map is described by the images of the source
columns (:class:`IsoSpec`) and extended to the range by sup-linearity.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Optional, Sequence

from .core import (
    NEG_INF,
    ExtReal,
    TropVector,
    hilbert_distance,
    is_finite,
    lower_add,
    pointwise_sup,
    upper_add,
    values_equal,
)
from .irreducible import equal_up_to_constant, essential_columns, fully_reduced
from .kernel import (
    Kernel,
    combine,
    e_x_vector,
    range_membership,
    residual_coefficients,
    sup_combine_rows,
    sup_conjugate_rows,
)

SIZE_CAP = 9


class NotFullyReducedError(ValueError):
    pass


class SizeCapError(ValueError):
    pass


class IsoSpecError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AffineReparam:
    """``Jf = g + f o phi`` with ``g`` finite and ``phi`` a bijection.

    ``g`` lives on the target points; ``phi`` maps each target point to a
    source point.
    """

    g: TropVector
    phi: Mapping

    def __post_init__(self):
        phi = dict(self.phi)
        if set(phi) != set(self.g.points):
            raise ValueError("phi must be defined on exactly the points of g")
        if len(set(phi.values())) != len(phi):
            raise ValueError("phi is not injective")
        if not self.g.is_finite():
            raise ValueError(f"g must be finite, got {self.g}")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def identity(cls, points: Sequence[Hashable]) -> "AffineReparam":
        pts = tuple(points)
        return cls(TropVector.constant(pts, 0), {p: p for p in pts})

    @property
    def target_points(self) -> tuple:
        return self.g.points

    @property
    def source_points(self) -> tuple:
        return tuple(self.phi[x] for x in self.g.points)

    def __eq__(self, other):
        if not isinstance(other, AffineReparam):
            return NotImplemented
        return self.g == other.g and self.phi == other.phi

    def __repr__(self):
        return f"AffineReparam(g={self.g!r}, phi={self.phi!r})"


def apply_iso(J: AffineReparam, f: TropVector) -> TropVector:
    """``(Jf)(x) = g(x) + f(phi(x))`` with -inf absorbing."""
    if set(f.points) != set(J.phi.values()):
        raise ValueError(f"f is indexed by {f.points!r}, expected {J.source_points!r}")
    return TropVector(J.g.points, tuple(lower_add(gx, f[J.phi[x]]) for x, gx in J.g.items()))


def invert_iso(J: AffineReparam) -> AffineReparam:
    """``(-g o phi^-1, phi^-1)``."""
    inv = {y: x for x, y in J.phi.items()}
    src = tuple(J.phi[x] for x in J.g.points)
    return AffineReparam(TropVector(src, tuple(-J.g[inv[y]] for y in src)), inv)


def is_max_plus_iso(B_F: Kernel, B_G: Kernel, J: AffineReparam) -> bool:
    """Whether ``J`` maps ``Rg(B_F)`` onto ``Rg(B_G)``.

    Both ``J`` and its inverse commute with sups and scalars, so checking
    the generator columns in each direction is enough.
    """
    if set(J.g.points) != set(B_G.x_points) or set(J.phi.values()) != set(B_F.x_points):
        raise ValueError("J does not map the ground set of B_F to that of B_G")
    Jinv = invert_iso(J)
    return (all(range_membership(B_G, apply_iso(J, c)) for c in B_F.columns())
            and all(range_membership(B_F, apply_iso(Jinv, c)) for c in B_G.columns()))


@dataclass(frozen=True, eq=False)
class IsoSpec:
    """A candidate (max,+)-linear map given by the images of source columns."""

    column_images: Mapping

    def image_rows(self, B_F: Kernel, target_points: Sequence[Hashable]) -> tuple:
        imgs = [self.column_images[y].aligned(target_points) for y in B_F.y_points]
        return tuple(zip(*imgs))


def _target_points(spec: IsoSpec, B_F: Kernel) -> tuple:
    missing = set(B_F.y_points) - set(spec.column_images)
    if missing:
        raise IsoSpecError(f"no image for columns {sorted(map(str, missing))}")
    return next(iter(spec.column_images.values())).points


def iso_spec_from_affine(B_F: Kernel, J: AffineReparam) -> IsoSpec:
    return IsoSpec({y: apply_iso(J, B_F.column(y)) for y in B_F.y_points})


def spec_image(B_F: Kernel, spec: IsoSpec, f: TropVector, coeffs=None) -> TropVector:
    """Image of ``f`` under the map induced by ``spec``.

    Uses the canonical coefficients ``-B_F° f`` unless explicit
    coefficients over ``B_F.y_points`` are supplied.
    """
    pts = _target_points(spec, B_F)
    if coeffs is None:
        coeffs = residual_coefficients(B_F, f).values
    return TropVector(pts, sup_combine_rows(spec.image_rows(B_F, pts), coeffs))


def spec_preimage(B_F: Kernel, spec: IsoSpec, h: TropVector) -> TropVector:
    """Residuated inverse ``combine(B_F, -M° h)`` where ``M`` holds the column images."""
    pts = _target_points(spec, B_F)
    rows = spec.image_rows(B_F, pts)
    mh = sup_conjugate_rows(tuple(zip(*rows)), h.aligned(pts))
    return combine(B_F, tuple(-v for v in mh))


SCALAR_GRID = (Fraction(0), Fraction(1), Fraction(-3, 2))


def _verification_family(B_F: Kernel) -> list:
    """``(vector, coefficients)`` pairs with coefficients written down directly."""
    ys = B_F.y_points
    n = len(ys)
    unit = lambda js: tuple(Fraction(0) if k in js else NEG_INF for k in range(n))
    fam = [(B_F.column(y), unit({k})) for k, y in enumerate(ys)]
    for k, l in itertools.combinations(range(n), 2):
        fam.append((pointwise_sup([B_F.column(ys[k]), B_F.column(ys[l])]), unit({k, l})))
    for x in B_F.x_points:
        fam.append((e_x_vector(B_F, x), tuple(-v for v in B_F.row(x).values)))
    out = []
    for f, a in fam:
        for lam in SCALAR_GRID:
            out.append((f.shift(lam), tuple(lower_add(v, lam) for v in a)))
    return out


def verify_iso_spec(B_F: Kernel, B_G: Kernel, spec: IsoSpec) -> None:
    """Raise :class:`IsoSpecError` unless ``spec`` induces a bijection ``Rg(B_F) -> Rg(B_G)``.

    Checked on columns, pairwise sups of columns, the ``e_x`` and their
    shifts: two representations of one vector must have the same image, the
    image must lie in ``Rg(B_G)`` and the round trip must return the input.
    Each target column must also come back to itself.
    """
    pts = _target_points(spec, B_F)
    if set(pts) != set(B_G.x_points):
        raise IsoSpecError("column images do not live on the target ground set")
    for y, img in spec.column_images.items():
        if tuple(img.points) != pts:
            raise IsoSpecError(f"image of column {y!r} uses a different point order")
    for f, coeffs in _verification_family(B_F):
        direct = spec_image(B_F, spec, f, coeffs)
        canon = spec_image(B_F, spec, f)
        if direct != canon:
            raise IsoSpecError(f"two representations of {f} have images {direct} and {canon}")
        if not range_membership(B_G, canon):
            raise IsoSpecError(f"image {canon} of {f} is outside the target range")
        if spec_preimage(B_F, spec, canon) != f:
            raise IsoSpecError(f"map is not invertible at {f}")
    for c in B_G.columns():
        back = spec_preimage(B_F, spec, c)
        if spec_image(B_F, spec, back) != c:
            raise IsoSpecError(f"target column {c} is not reached")


def decompose_iso(B_F: Kernel, B_G: Kernel, spec: IsoSpec) -> Optional[AffineReparam]:
    """Write the map induced by ``spec`` as ``Jf = g + f o phi``, if possible.

    Each ``J e'_y`` must be a finite shift of exactly one ``e_x`` of the
    target, and the matching must be a bijection.  The pairing
    ``inf_y J e'_y(x) + J^-1 e_x(y)`` must vanish with its only minimizer at
    ``y = phi(x)``.  Returns ``None`` when any of this fails.  Raises
    :class:`IsoSpecError` when ``spec`` does not define a bijection.
    """
    verify_iso_spec(B_F, B_G, spec)
    pts = _target_points(spec, B_F)
    rows = spec.image_rows(B_F, pts)
    src = B_F.x_points
    Je = {y: TropVector(pts, sup_combine_rows(rows, tuple(-v for v in B_F.row(y).values)))
          for y in src}
    e_G = {x: e_x_vector(B_G, x).reindex(pts) for x in pts}
    psi = {}
    for y in src:
        hits = [x for x in pts if equal_up_to_constant(Je[y].values, e_G[x].values)
                and is_finite(Je[y][x])]
        # e_x may carry +inf; the constant gap must be read off finite coordinates
        if len(hits) != 1:
            return None
        psi[y] = hits[0]
    if len(set(psi.values())) != len(psi) or set(psi.values()) != set(pts):
        return None
    phi = {x: y for y, x in psi.items()}
    g = TropVector(pts, tuple(Je[phi[x]][x] for x in pts))
    if not g.is_finite():
        return None
    for x in pts:
        back = spec_preimage(B_F, spec, e_G[x])
        terms = [upper_add(Je[y][x], back[y]) for y in src]
        low = min(terms)
        if not values_equal(low, Fraction(0)):
            return None
        argmin = [y for y, t in zip(src, terms) if values_equal(t, low)]
        if argmin != [phi[x]]:
            return None
    J = AffineReparam(g, phi)
    for y in B_F.y_points:
        if apply_iso(J, B_F.column(y)) != spec.column_images[y]:
            return None
    return J


def hilbert_profile(B: Kernel, full: bool = False) -> tuple:
    """Pairwise Hilbert distances between columns, largest first.

    Uses the essential columns unless ``full`` is set.
    """
    ys = B.y_points if full else essential_columns(B).essential_columns
    cols = [B.column(y) for y in ys]
    for y, c in zip(ys, cols):
        if not c.is_finite():
            raise ValueError(f"column {y!r} has an infinite entry")
    dists = [hilbert_distance(a, b) for a, b in itertools.combinations(cols, 2)]
    return tuple(sorted(dists, reverse=True))


def hilbert_obstruction(B: Kernel, C: Kernel) -> bool:
    """True when no column-to-column isometry can exist, judged on full column sets."""
    return hilbert_profile(B, full=True) != hilbert_profile(C, full=True)


@dataclass(frozen=True, eq=False)
class KernelConjugacy:
    """``c(x', y') = psi(x') + b(tau(x'), sigma(y')) + varphi(y')``."""

    tau: Mapping
    sigma: Mapping
    psi: TropVector
    varphi: TropVector

    def verify(self, B: Kernel, C: Kernel) -> bool:
        for xp in C.x_points:
            for yp in C.y_points:
                rhs = lower_add(lower_add(self.psi[xp], B.entry(self.tau[xp], self.sigma[yp])),
                                self.varphi[yp])
                if not values_equal(C.entry(xp, yp), rhs):
                    return False
        return True

    def as_iso(self) -> AffineReparam:
        """``Jf = psi + f o tau``, mapping ``Rg(B)`` onto ``Rg(C)``."""
        return AffineReparam(self.psi, self.tau)


def _distance_matrix(vectors: Sequence[TropVector]) -> list:
    return [[hilbert_distance(a, b) for b in vectors] for a in vectors]


def _isometries(src: list, dst: list):
    """Bijections ``k -> p(k)`` with ``src[k][l] == dst[p(k)][p(l)]``, in lexicographic order."""
    n = len(src)
    assign, used = [], [False] * n

    def rec(k):
        if k == n:
            yield tuple(assign)
            return
        for cand in range(n):
            if used[cand]:
                continue
            if all(values_equal(src[k][l], dst[cand][assign[l]]) for l in range(k)) \
                    and values_equal(src[k][k], dst[cand][cand]):
                used[cand] = True
                assign.append(cand)
                yield from rec(k + 1)
                assign.pop()
                used[cand] = False

    yield from rec(0)


def find_kernel_conjugacy(B: Kernel, C: Kernel, allow_large: bool = False,
                          require_fully_reduced: bool = True) -> Optional[KernelConjugacy]:
    """Search bijections ``tau, sigma`` making ``c - b(tau, sigma)`` additively separable.

    ``tau`` ranges over isometries of the row Hilbert distances and ``sigma``
    over those of the columns; the first success in lexicographic order wins.
    Returns ``None`` on a size mismatch or when nothing is found.
    """
    for K, name in ((B, "first"), (C, "second")):
        if not K.is_finite():
            raise ValueError(f"{name} kernel has -inf entries; conjugacy search needs finite kernels")
        if not allow_large and max(K.shape) > SIZE_CAP:
            raise SizeCapError(f"{name} kernel is {K.shape[0]}x{K.shape[1]}, above the cap of {SIZE_CAP}")
        if require_fully_reduced and not fully_reduced(K):
            raise NotFullyReducedError(f"{name} kernel is not fully reduced")
    if B.shape != C.shape:
        return None
    b, c = B.entries, C.entries
    n, m = C.shape
    rows_b = _distance_matrix(B.rows())
    rows_c = _distance_matrix(C.rows())
    cols_b = _distance_matrix(B.columns())
    cols_c = _distance_matrix(C.columns())
    sigmas = None
    for tau in _isometries(rows_c, rows_b):
        if sigmas is None:
            sigmas = list(_isometries(cols_c, cols_b))
        for sigma in sigmas:
            D = [[c[i][j] - b[tau[i]][sigma[j]] for j in range(m)] for i in range(n)]
            if all(values_equal(D[i][j], D[i][0] + D[0][j] - D[0][0])
                   for i in range(n) for j in range(m)):
                return KernelConjugacy(
                    {C.x_points[i]: B.x_points[tau[i]] for i in range(n)},
                    {C.y_points[j]: B.y_points[sigma[j]] for j in range(m)},
                    TropVector(C.x_points, tuple(D[i][0] - D[0][0] for i in range(n))),
                    TropVector(C.y_points, tuple(D[0][j] for j in range(m))))
    return None


def push_through_generators(src_cols: Kernel, dst_cols: Kernel, f: TropVector) -> TropVector:
    """Send ``f = sup_j a_j + src_j`` to ``sup_j a_j + dst_j``, columns matched by position."""
    if len(src_cols.y_points) != len(dst_cols.y_points):
        raise ValueError("source and destination need the same number of columns")
    if not range_membership(src_cols, f):
        raise ValueError(f"{f} is not in the source range")
    a = residual_coefficients(src_cols, f).values
    return combine(dst_cols, a)


def dual_value(B: Kernel, f: TropVector, g: TropVector) -> ExtReal:
    """``sup_y [inf_z g(z) - b(z,y)] + [inf_x f(x) + b(x,y)]`` with -inf absorbing.

    Warns when ``g`` is outside ``Rg(B)``, where the value depends on the
    kernel chosen to generate the space.
    """
    fv, gv = f.aligned(B.x_points), g.aligned(B.x_points)
    if not range_membership(B, g):
        warnings.warn(f"g = {g} is not in the range of the kernel", stacklevel=2)
    best = NEG_INF
    for j in range(len(B.y_points)):
        col = [row[j] for row in B.entries]
        left = min(lower_add(gz, -bz) for gz, bz in zip(gv, col))
        right = min(lower_add(fx, bx) for fx, bx in zip(fv, col))
        best = max(best, lower_add(left, right))
    return best


def primal_value(f: TropVector, g: TropVector) -> ExtReal:
    """``inf_x f(x) + g(x)`` with -inf absorbing."""
    return min(lower_add(a, b) for a, b in zip(f.values, g.aligned(f.points)))
