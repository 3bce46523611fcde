"""Extended-real arithmetic and finite tropical vectors.

Finite values are :class:`fractions.Fraction`.  The two infinities are the
float constants :data:`NEG_INF` and :data:`POS_INF`, which compare correctly
against fractions.  Finite floats only show up in approximate mode (the
``TROPISO_APPROX`` environment variable, or factories that cannot stay
exact); comparisons involving them use :data:`TOLERANCE`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

NEG_INF = float("-inf")
POS_INF = float("inf")
TOLERANCE = 1e-9
APPROX_ENV = "TROPISO_APPROX"

ExtReal = Union[Fraction, float]

_NEG_INF_WORDS = {"-inf", "-infinity", "−inf", "−∞", "-∞"}
_POS_INF_WORDS = {"inf", "+inf", "infinity", "+infinity", "∞", "+∞"}


def approximate_mode() -> bool:
    return os.environ.get(APPROX_ENV, "").strip().lower() not in ("", "0", "false", "no")


def ext(value) -> ExtReal:
    """Convert user input to an extended real.

    Accepts ints, fractions, decimals, floats and strings such as ``"1/2"``,
    ``"0.25"`` or ``"-inf"``.  Finite floats are read through their decimal
    representation, so ``0.1`` becomes ``Fraction(1, 10)``.  In approximate
    mode finite values are returned as floats instead.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not extended reals")
    if isinstance(value, str):
        word = value.strip().lower()
        if word in _NEG_INF_WORDS:
            return NEG_INF
        if word in _POS_INF_WORDS:
            return POS_INF
        try:
            q = Fraction(word)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an extended real literal: {value!r}") from exc
        return float(q) if approximate_mode() else q
    if isinstance(value, float):
        if math.isnan(value):
            raise ValueError("NaN is not an extended real")
        if math.isinf(value):
            return value
        return value if approximate_mode() else Fraction(repr(value))
    if isinstance(value, (int, Fraction, Decimal)):
        q = Fraction(value)
        return float(q) if approximate_mode() else q
    raise TypeError(f"cannot interpret {value!r} as an extended real")


def _norm(value) -> ExtReal:
    # internal normalisation: keeps floats as floats, never consults the env
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            raise ValueError("NaN is not an extended real")
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not extended reals")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        return ext(value)
    raise TypeError(f"cannot interpret {value!r} as an extended real")


def is_finite(a: ExtReal) -> bool:
    return not (a == POS_INF or a == NEG_INF)


def is_exact(a: ExtReal) -> bool:
    return isinstance(a, Fraction) or not is_finite(a)


def format_ext(a: ExtReal) -> str:
    if a == NEG_INF:
        return "-inf"
    if a == POS_INF:
        return "+inf"
    if isinstance(a, Fraction):
        return str(a)
    return repr(a)


def values_equal(a: ExtReal, b: ExtReal) -> bool:
    """Exact equality, relaxed to :data:`TOLERANCE` when a finite float is involved."""
    if a == b:
        return True
    if not (is_finite(a) and is_finite(b)):
        return False
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return False
    return abs(a - b) <= TOLERANCE


def values_le(a: ExtReal, b: ExtReal) -> bool:
    if a <= b:
        return True
    return is_finite(a) and is_finite(b) and not (
        isinstance(a, Fraction) and isinstance(b, Fraction)) and a - b <= TOLERANCE


def lower_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Addition with -inf absorbing: ``(-inf) + (+inf) = -inf``."""
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def upper_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Addition with +inf absorbing: ``(-inf) + (+inf) = +inf``."""
    if a == POS_INF or b == POS_INF:
        return POS_INF
    return a + b


def negate(a: ExtReal) -> ExtReal:
    return -a


def lower_sub(a: ExtReal, b: ExtReal) -> ExtReal:
    """``a - b`` computed as ``lower_add(a, -b)``."""
    return lower_add(a, -b)


def upper_sub(a: ExtReal, b: ExtReal) -> ExtReal:
    return upper_add(a, -b)


@dataclass(frozen=True, eq=False)
class TropVector:
    """A function from a finite labelled ground set to the extended reals."""

    points: tuple
    values: tuple

    def __post_init__(self):
        points = tuple(self.points)
        values = tuple(_norm(v) for v in self.values)
        if len(points) != len(values):
            raise ValueError(f"{len(points)} points but {len(values)} values")
        if len(set(points)) != len(points):
            raise ValueError(f"duplicate point labels in {points!r}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Hashable, object]) -> "TropVector":
        return cls(tuple(mapping), tuple(mapping.values()))

    @classmethod
    def constant(cls, points: Iterable[Hashable], value) -> "TropVector":
        points = tuple(points)
        return cls(points, (value,) * len(points))

    @classmethod
    def parse(cls, points: Iterable[Hashable], values: Iterable[object]) -> "TropVector":
        """Build a vector from user literals (see :func:`ext`)."""
        return cls(tuple(points), tuple(ext(v) for v in values))

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def __getitem__(self, label) -> ExtReal:
        try:
            return self.values[self._index[label]]
        except KeyError:
            raise KeyError(f"unknown point {label!r}") from None

    def __len__(self) -> int:
        return len(self.points)

    def items(self):
        return zip(self.points, self.values)

    def as_dict(self) -> dict:
        return dict(self.items())

    def reindex(self, points: Sequence[Hashable]) -> "TropVector":
        points = tuple(points)
        if set(points) != set(self.points) or len(points) != len(self.points):
            raise ValueError(f"point sets differ: {self.points!r} vs {points!r}")
        if points == self.points:
            return self
        return TropVector(points, tuple(self[p] for p in points))

    def aligned(self, points: Sequence[Hashable]) -> tuple:
        """Values listed in the order of ``points``; raises on mismatch."""
        return self.reindex(points).values

    def shift(self, lam: ExtReal) -> "TropVector":
        """``f + lam`` with -inf absorbing."""
        lam = _norm(lam)
        return TropVector(self.points, tuple(lower_add(v, lam) for v in self.values))

    def is_finite(self) -> bool:
        return all(is_finite(v) for v in self.values)

    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.values)

    def __eq__(self, other):
        if not isinstance(other, TropVector):
            return NotImplemented
        if set(self.points) != set(other.points) or len(self.points) != len(other.points):
            return False
        return all(values_equal(a, other[p]) for p, a in self.items())

    def __hash__(self):
        return hash(frozenset(self.points))

    def __le__(self, other: "TropVector") -> bool:
        return all(values_le(a, b) for a, b in zip(self.values, other.aligned(self.points)))

    def __ge__(self, other: "TropVector") -> bool:
        return other.__le__(self)

    def __repr__(self):
        body = ", ".join(f"{p!r}: {format_ext(v)}" for p, v in self.items())
        return f"TropVector({{{body}}})"

    def __str__(self):
        return "(" + ", ".join(format_ext(v) for v in self.values) + ")"


def _common_points(fs: Sequence[TropVector]) -> tuple:
    if not fs:
        raise ValueError("need at least one vector")
    points = fs[0].points
    for f in fs[1:]:
        if set(f.points) != set(points) or len(f.points) != len(points):
            raise ValueError(f"mismatched point lists: {points!r} vs {f.points!r}")
    return points


def pointwise_sup(fs: Sequence[TropVector]) -> TropVector:
    fs = list(fs)
    points = _common_points(fs)
    columns = [f.aligned(points) for f in fs]
    return TropVector(points, tuple(max(vals) for vals in zip(*columns)))


def pointwise_inf(fs: Sequence[TropVector]) -> TropVector:
    fs = list(fs)
    points = _common_points(fs)
    columns = [f.aligned(points) for f in fs]
    return TropVector(points, tuple(min(vals) for vals in zip(*columns)))


def difference(f: TropVector, g: TropVector) -> TropVector:
    """Coordinatewise ``f - g`` with -inf absorbing."""
    return TropVector(f.points, tuple(lower_sub(a, b) for a, b in zip(f.values, g.aligned(f.points))))


def hilbert_seminorm(z: TropVector) -> ExtReal:
    """``max_i z_i - min_j z_j`` for a vector with finite coordinates."""
    if not z.values:
        raise ValueError("empty vector")
    if not z.is_finite():
        raise ValueError(f"Hilbert seminorm needs finite coordinates, got {z}")
    return max(z.values) - min(z.values)


def hilbert_distance(f: TropVector, g: TropVector) -> ExtReal:
    return hilbert_seminorm(difference(f, g))


@dataclass(frozen=True)
class ArchClassOrder:
    """Outcome of comparing two Archimedean classes.

    ``witness_alpha`` is the least ``alpha`` with ``f <= g + alpha``; it is
    ``None`` when ``leq`` is false or when no coordinate constrains alpha.
    """

    leq: bool
    witness_alpha: Optional[ExtReal] = None


def archimedean_leq(f: TropVector, g: TropVector) -> ArchClassOrder:
    """Decide ``[f] <= [g]``, i.e. whether ``f <= g + alpha`` for some real alpha."""
    alpha = None
    for a, b in zip(f.values, g.aligned(f.points)):
        if a == NEG_INF or b == POS_INF:
            continue
        if b == NEG_INF or a == POS_INF:
            return ArchClassOrder(False)
        gap = a - b
        if alpha is None or gap > alpha:
            alpha = gap
    return ArchClassOrder(True, alpha)


def archimedean_equivalent(f: TropVector, g: TropVector) -> bool:
    return archimedean_leq(f, g).leq and archimedean_leq(g, f).leq
