"""Kernels ``b: X x Y -> R u {-inf}`` and their Fenchel-Moreau conjugations.

For a kernel ``b`` the two conjugations are

    (B f)(x)  = sup_y b(x, y) - f(y)
    (B° h)(y) = sup_x b(x, y) - h(x)

both evaluated with -inf absorbing.  ``Rg(B)`` is the set of
``sup_y a_y + b(., y)``; ``B B°`` projects onto it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

from .core import (
    NEG_INF,
    POS_INF,
    ExtReal,
    TropVector,
    _norm,
    ext,
    is_exact,
    is_finite,
    lower_add,
    pointwise_inf,
    pointwise_sup,
    upper_add,
    values_equal,
)

VectorLike = Union[TropVector, Mapping, Sequence]

# Canonical coefficient vectors are TropVectors over the kernel's y_points.
CoefficientVector = TropVector


def _default_labels(n: int) -> tuple:
    return tuple(str(i + 1) for i in range(n))


@dataclass(frozen=True, eq=False)
class Kernel:
    """A finite matrix ``b(x, y)`` with entries in ``R u {-inf}``.

    Rows are indexed by ``x_points`` and columns by ``y_points``.  Every row
    and every column must hold a finite entry, and ``+inf`` is rejected.
    """

    x_points: tuple
    y_points: tuple
    entries: tuple

    def __post_init__(self):
        xs, ys = tuple(self.x_points), tuple(self.y_points)
        rows = tuple(tuple(_norm(v) for v in row) for row in self.entries)
        if not xs or not ys:
            raise ValueError("kernel needs at least one row and one column")
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("point labels must be distinct")
        if len(rows) != len(xs):
            raise ValueError(f"{len(xs)} x_points but {len(rows)} rows")
        for x, row in zip(xs, rows):
            if len(row) != len(ys):
                raise ValueError(f"row {x!r} has {len(row)} entries, expected {len(ys)}")
            for y, v in zip(ys, row):
                if v == POS_INF:
                    raise ValueError(f"+inf entry at ({x!r}, {y!r}); kernels take values in R u {{-inf}}")
            if not any(is_finite(v) for v in row):
                raise ValueError(f"row {x!r} has no finite entry")
        for j, y in enumerate(ys):
            if not any(is_finite(row[j]) for row in rows):
                raise ValueError(f"column {y!r} has no finite entry")
        object.__setattr__(self, "x_points", xs)
        object.__setattr__(self, "y_points", ys)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]], x_points=None, y_points=None) -> "Kernel":
        """Build a kernel from literal cells; labels default to ``"1", "2", ...``."""
        rows = [[ext(v) for v in row] for row in rows]
        if x_points is None:
            x_points = _default_labels(len(rows))
        if y_points is None:
            y_points = _default_labels(len(rows[0]) if rows else 0)
        return cls(tuple(x_points), tuple(y_points), tuple(tuple(r) for r in rows))

    @cached_property
    def _xi(self) -> dict:
        return {x: i for i, x in enumerate(self.x_points)}

    @cached_property
    def _yi(self) -> dict:
        return {y: j for j, y in enumerate(self.y_points)}

    @property
    def shape(self) -> tuple:
        return len(self.x_points), len(self.y_points)

    def entry(self, x, y) -> ExtReal:
        return self.entries[self._xi[x]][self._yi[y]]

    def column(self, y) -> TropVector:
        if y not in self._yi:
            raise KeyError(f"unknown y point {y!r}")
        j = self._yi[y]
        return TropVector(self.x_points, tuple(row[j] for row in self.entries))

    def row(self, x) -> TropVector:
        if x not in self._xi:
            raise KeyError(f"unknown x point {x!r}")
        return TropVector(self.y_points, self.entries[self._xi[x]])

    def columns(self) -> list:
        return [self.column(y) for y in self.y_points]

    def rows(self) -> list:
        return [self.row(x) for x in self.x_points]

    def transpose(self) -> "Kernel":
        return Kernel(self.y_points, self.x_points, tuple(zip(*self.entries)))

    def restrict_columns(self, ys: Sequence[Hashable]) -> "Kernel":
        idx = [self._yi[y] for y in ys]
        return Kernel(self.x_points, tuple(ys), tuple(tuple(row[j] for j in idx) for row in self.entries))

    @property
    def is_square(self) -> bool:
        return set(self.x_points) == set(self.y_points) and len(self.x_points) == len(self.y_points)

    def is_finite(self) -> bool:
        return all(is_finite(v) for row in self.entries for v in row)

    def has_neg_inf(self) -> bool:
        return not self.is_finite()

    def is_exact(self) -> bool:
        return all(is_exact(v) for row in self.entries for v in row)

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return (self.x_points == other.x_points and self.y_points == other.y_points
                and all(values_equal(a, b) for r, s in zip(self.entries, other.entries)
                        for a, b in zip(r, s)))

    def __hash__(self):
        return hash((self.x_points, self.y_points))

    def __repr__(self):
        return f"Kernel({len(self.x_points)}x{len(self.y_points)}, x={self.x_points!r}, y={self.y_points!r})"


def _as_vector(v: VectorLike, points: tuple, what: str) -> tuple:
    """Values of ``v`` aligned with ``points``."""
    if isinstance(v, TropVector):
        try:
            return v.aligned(points)
        except ValueError:
            raise ValueError(f"{what} is indexed by {v.points!r}, expected {points!r}") from None
    if isinstance(v, Mapping):
        if set(v) != set(points):
            raise ValueError(f"{what} is indexed by {tuple(v)!r}, expected {points!r}")
        return tuple(_norm(v[p]) for p in points)
    vals = tuple(_norm(a) for a in v)
    if len(vals) != len(points):
        raise ValueError(f"{what} has {len(vals)} values, expected {len(points)}")
    return vals


# Raw matrix helpers; matrices here need not satisfy the Kernel invariants.

def sup_conjugate_rows(rows: Sequence[Sequence[ExtReal]], vals: Sequence[ExtReal]) -> tuple:
    """``out[i] = max_j rows[i][j] - vals[j]`` with -inf absorbing."""
    return tuple(max((lower_add(b, -v) for b, v in zip(row, vals)), default=NEG_INF) for row in rows)


def sup_combine_rows(rows: Sequence[Sequence[ExtReal]], coeffs: Sequence[ExtReal]) -> tuple:
    """``out[i] = max_j coeffs[j] + rows[i][j]`` with -inf absorbing."""
    return tuple(max((lower_add(a, b) for a, b in zip(coeffs, row)), default=NEG_INF) for row in rows)


def conjugate(B: Kernel, f: VectorLike) -> TropVector:
    """``(B f)(x) = sup_y b(x, y) - f(y)`` for ``f`` over ``B.y_points``."""
    vals = _as_vector(f, B.y_points, "f")
    return TropVector(B.x_points, sup_conjugate_rows(B.entries, vals))


def transpose_conjugate(B: Kernel, h: VectorLike) -> TropVector:
    """``(B° h)(y) = sup_x b(x, y) - h(x)`` for ``h`` over ``B.x_points``."""
    vals = _as_vector(h, B.x_points, "h")
    return TropVector(B.y_points, sup_conjugate_rows(tuple(zip(*B.entries)), vals))


def project(B: Kernel, h: VectorLike) -> TropVector:
    """Greatest element of ``Rg(B)`` below ``h``, computed as ``B(B° h)``."""
    return conjugate(B, transpose_conjugate(B, h))


def range_membership(B: Kernel, h: VectorLike) -> bool:
    h = TropVector(B.x_points, _as_vector(h, B.x_points, "h"))
    return project(B, h) == h


def combine(B: Kernel, a: VectorLike) -> TropVector:
    """``sup_y a_y + b(., y)``, the tropical linear combination of the columns."""
    coeffs = _as_vector(a, B.y_points, "coefficients")
    return TropVector(B.x_points, sup_combine_rows(B.entries, coeffs))


def residual_coefficients(B: Kernel, h: VectorLike) -> CoefficientVector:
    """Largest coefficients ``a`` with ``combine(B, a) <= h``.

    Equal to ``-(B° h)``.  An entry is ``+inf`` only when every finite entry
    of that column sits under a ``+inf`` coordinate of ``h``; that is the
    only way ``combine(B, a) == project(B, h)`` can hold there.
    """
    bh = transpose_conjugate(B, h)
    return TropVector(B.y_points, tuple(-v for v in bh.values))


def e_x_vector(B: Kernel, x) -> TropVector:
    """``e_x = B b(x, .) = sup_y b(., y) - b(x, y)``, the largest range element vanishing at ``x``."""
    return conjugate(B, B.row(x))


def e_table(B: Kernel) -> dict:
    return {x: e_x_vector(B, x) for x in B.x_points}


def inf_closure_representation(B: Kernel, h: VectorLike) -> TropVector:
    """``inf_x e_x + h(x)``, with +inf absorbing in each sum."""
    h = TropVector(B.x_points, _as_vector(h, B.x_points, "h"))
    terms = [TropVector(B.x_points, tuple(upper_add(v, h[x]) for v in e_x_vector(B, x).values))
             for x in B.x_points]
    return pointwise_inf(terms)


def in_inf_closure(B: Kernel, h: VectorLike) -> bool:
    """Whether ``h`` is an infimum of translates of the ``e_x``."""
    h = TropVector(B.x_points, _as_vector(h, B.x_points, "h"))
    return inf_closure_representation(B, h) == h


def separates_points(B: Kernel) -> bool:
    """Whether ``Rg(B)`` is proper and separates points.

    Two points ``x != x'`` are separated when two range elements, finite at
    both, have different increments ``g(x) - g(x')``.  Any range element
    agrees at ``x`` and ``x'`` with a sup of at most two scaled columns, so
    it is enough to scan those.
    """
    cols = [B.column(y).values for y in B.y_points]
    n = len(B.x_points)
    for i, k in itertools.combinations(range(n), 2):
        seen = set()
        for p, q in itertools.product(range(len(cols)), repeat=2):
            cp, cq = cols[p], cols[q]
            finite = [v for v in (cp[i], cp[k], cq[i], cq[k]) if is_finite(v)]
            spread = (max(finite) - min(finite)) if finite else 0
            ts = {0}
            for a, b in ((cp[i], cq[i]), (cp[k], cq[k])):
                if is_finite(a) and is_finite(b):
                    ts.update({a - b - 1, a - b, a - b + 1})
            ts.update({-2 * spread - 1, 2 * spread + 1})
            for t in ts:
                gi = max(cp[i], lower_add(t, cq[i]))
                gk = max(cp[k], lower_add(t, cq[k]))
                if is_finite(gi) and is_finite(gk):
                    seen.add(gi - gk)
                    if len(seen) > 1:
                        break
            if len(seen) > 1:
                break
        if len(seen) < 2:
            return False
    return True


def is_symmetric(B: Kernel) -> bool:
    if not B.is_square:
        return False
    return all(values_equal(B.entry(x, y), B.entry(y, x)) for x in B.x_points for y in B.x_points)


def _require_square(B: Kernel, what: str) -> None:
    if not B.is_square:
        raise ValueError(f"{what} needs X = Y, got x={B.x_points!r}, y={B.y_points!r}")


LAMBDA_GRID = (Fraction(-2), Fraction(-1, 2), Fraction(0), Fraction(1), Fraction(3))


def anti_involution_violation(B: Kernel, samples: Sequence[VectorLike],
                              lambdas: Sequence[ExtReal] = LAMBDA_GRID) -> Optional[tuple]:
    """First failure of the anti-involution checks, or ``None``.

    Each sample is a coefficient vector ``a`` and is tested through
    ``f = combine(B, a)``.  Returns ``(reason, f)``.
    """
    _require_square(B, "anti-involution check")
    # X = Y as sets; conjugation is applied in B's column order
    fs = [combine(B, a) for a in samples]
    as_y = lambda v: v.reindex(B.y_points)
    for f in fs:
        if conjugate(B, as_y(conjugate(B, as_y(f)))) != f:
            return ("B(B f) != f", f)
        for lam in lambdas:
            lam = _norm(lam)
            lhs = conjugate(B, as_y(f.shift(lam)))
            if lhs != conjugate(B, as_y(f)).shift(-lam):
                return (f"B(f + {lam}) != B f - {lam}", f)
    pairs = [(f, g) for f in fs for g in fs if f <= g]
    pairs += [(f, pointwise_sup([f, g])) for f in fs for g in fs]
    for f, g in pairs:
        if not conjugate(B, as_y(f)) >= conjugate(B, as_y(g)):
            return ("B is not order reversing", f)
    return None


def check_anti_involution(B: Kernel, samples: Sequence[VectorLike],
                          lambdas: Sequence[ExtReal] = LAMBDA_GRID) -> bool:
    """Whether ``B`` acts as an anti-involution of ``Rg(B)`` on the sampled elements."""
    return anti_involution_violation(B, samples, lambdas) is None


def find_anti_involution_witness(B: Kernel, grid: Sequence[ExtReal] = (NEG_INF, -2, -1, 0, 1, 2)):
    """Scan coefficient vectors from ``grid`` for an element with ``B B f != f``."""
    _require_square(B, "anti-involution check")
    grid = [_norm(v) for v in grid]
    for coeffs in itertools.product(grid, repeat=len(B.y_points)):
        hit = anti_involution_violation(B, [coeffs])
        if hit is not None:
            return hit[1]
    return None


def strict_trop_monotone(B: Kernel) -> bool:
    """``b(x,x) + b(y,y) >= b(x,y) + b(y,x)`` for all pairs, with equality only on the diagonal."""
    _require_square(B, "strict tropical monotonicity")
    for x, y in itertools.combinations(B.x_points, 2):
        diag = lower_add(B.entry(x, x), B.entry(y, y))
        cross = lower_add(B.entry(x, y), B.entry(y, x))
        if not diag > cross or values_equal(diag, cross):
            return False
    return True
