"""Weak metrics and the kernel factories built on them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence

import networkx as nx

from .core import ExtReal, TOLERANCE, TropVector, _norm, ext, is_finite, values_equal
from .kernel import Kernel, _default_labels


@dataclass(frozen=True, eq=False)
class WeakMetric:
    """A finite map ``delta`` with zero diagonal and the triangle inequality.

    ``delta`` may be asymmetric and negative, but its symmetrization
    ``delta(x, y) + delta(y, x)`` must vanish only on the diagonal.  When
    ``approximate`` is set, the axioms are checked up to the global tolerance.
    ``log_base`` records that values are logarithms in that base.
    """

    points: tuple
    delta: tuple
    approximate: bool = False
    log_base: Optional[Fraction] = None

    def __post_init__(self):
        pts = tuple(self.points)
        rows = tuple(tuple(_norm(v) for v in row) for row in self.delta)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "delta", rows)
        n = len(pts)
        if n == 0:
            raise ValueError("weak metric needs at least one point")
        if len(set(pts)) != n:
            raise ValueError("point labels must be distinct")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"delta must be a {n}x{n} matrix")
        tol = TOLERANCE if self.approximate else 0
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if not is_finite(v):
                    raise ValueError(f"delta({pts[i]!r}, {pts[j]!r}) is not finite")
            if abs(row[i]) > tol:
                raise ValueError(f"delta({pts[i]!r}, {pts[i]!r}) = {row[i]} is not 0")
        for i, j, k in itertools.product(range(n), repeat=3):
            if rows[i][k] > rows[i][j] + rows[j][k] + tol:
                raise ValueError(
                    f"triangle inequality fails: delta({pts[i]!r},{pts[k]!r}) > "
                    f"delta({pts[i]!r},{pts[j]!r}) + delta({pts[j]!r},{pts[k]!r})")
        for i, j in itertools.combinations(range(n), 2):
            if rows[i][j] + rows[j][i] <= tol:
                raise ValueError(f"symmetrization vanishes at distinct points {pts[i]!r}, {pts[j]!r}")

    @classmethod
    def from_rows(cls, rows, points=None, **kw) -> "WeakMetric":
        rows = [[ext(v) for v in row] for row in rows]
        if points is None:
            points = _default_labels(len(rows))
        return cls(tuple(points), tuple(tuple(r) for r in rows), **kw)

    @cached_property
    def _idx(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def __call__(self, x, y) -> ExtReal:
        return self.delta[self._idx[x]][self._idx[y]]

    def is_symmetric(self) -> bool:
        n = len(self.points)
        return all(values_equal(self.delta[i][j], self.delta[j][i]) for i in range(n) for j in range(n))

    def symmetrized(self) -> "WeakMetric":
        n = len(self.points)
        rows = tuple(tuple(self.delta[i][j] + self.delta[j][i] for j in range(n)) for i in range(n))
        return WeakMetric(self.points, rows, approximate=self.approximate, log_base=self.log_base)

    def is_nonexpansive(self, f: TropVector) -> bool:
        """``f(x) <= delta(x, y) + f(y)`` for all pairs, i.e. 1-Lipschitz for ``delta``."""
        vals = f.aligned(self.points)
        tol = TOLERANCE if self.approximate else 0
        n = len(self.points)
        return all(vals[i] <= self.delta[i][j] + vals[j] + tol for i in range(n) for j in range(n))


def metric_from_graph(edges: Iterable[tuple], points: Optional[Sequence[Hashable]] = None) -> WeakMetric:
    """Shortest-path metric of an undirected weighted graph given as ``(u, v, w)`` triples."""
    G = nx.Graph()
    if points is not None:
        G.add_nodes_from(points)
    for u, v, w in edges:
        w = ext(w)
        if not is_finite(w) or w <= 0:
            raise ValueError(f"edge ({u!r}, {v!r}) needs a positive finite weight, got {w}")
        if G.has_edge(u, v):
            w = min(w, G[u][v]["weight"])
        G.add_edge(u, v, weight=w)
    pts = tuple(points) if points is not None else tuple(G.nodes)
    dist = nx.floyd_warshall(G, weight="weight")
    rows = []
    for x in pts:
        row = []
        for y in pts:
            d = dist[x][y]
            if d == math.inf:
                raise ValueError(f"graph is disconnected: no path from {x!r} to {y!r}")
            row.append(Fraction(d) if not isinstance(d, float) else d)
        rows.append(tuple(row))
    return WeakMetric(pts, tuple(rows))


def _exact_root(q: Fraction, p: Fraction) -> Optional[Fraction]:
    """``q ** p`` when it is rational, else None."""
    if p == 1:
        return q
    num, den = p.numerator, p.denominator
    # q**(num/den) is rational iff q is a perfect den-th power
    rn = round(q.numerator ** (1 / den))
    rd = round(q.denominator ** (1 / den))
    for a in (rn - 1, rn, rn + 1):
        for b in (rd - 1, rd, rd + 1):
            if a >= 0 and b > 0 and a ** den == q.numerator and b ** den == q.denominator:
                return Fraction(a, b) ** num
    return None


def from_metric(d: WeakMetric, p=1) -> Kernel:
    """``b = -d**p`` for a symmetric metric ``d`` and an exponent ``p`` in (0, 1].

    Snowflaking keeps ``d**p`` a metric.  The kernel stays exact when every
    distance is a perfect power; otherwise it falls back to floats.
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError(f"exponent must lie in (0, 1], got {p}")
    if not d.is_symmetric():
        raise ValueError("from_metric needs a symmetric metric")
    exact = not d.approximate and all(isinstance(v, Fraction) for row in d.delta for v in row)
    powered = []
    for row in d.delta:
        out = []
        for v in row:
            r = _exact_root(v, p) if exact else None
            if r is None:
                exact = False
                r = float(v) ** float(p)
            out.append(r)
        powered.append(out)
    if not exact:
        powered = [[float(v) for v in row] for row in powered]
    return Kernel(d.points, d.points, tuple(tuple(-v for v in row) for row in powered))


def from_weak_metric(delta: WeakMetric) -> Kernel:
    """Kernel whose range is the set of ``delta``-nonexpansive functions.

    Uses ``b(x, y) = -delta(y, x)``, so the columns are ``-delta(y, .)`` and
    ``e_x = delta(., x)``.
    """
    n = len(delta.points)
    rows = tuple(tuple(-delta.delta[j][i] for j in range(n)) for i in range(n))
    return Kernel(delta.points, delta.points, rows)


def _int_log(q: Fraction, base: Fraction) -> Optional[int]:
    """``k`` with ``base**k == q``, if it exists."""
    if q <= 0:
        return None
    k = round(math.log(q) / math.log(base))
    for c in (k - 1, k, k + 1):
        if base ** c == q:
            return c
    return None


def funk_weak_metric(points: Sequence[Sequence[object]], labels=None, linear_form=None,
                     base=None) -> WeakMetric:
    """Reverse Funk weak metric ``delta(x, y) = log max_i y_i / x_i``.

    Points must have positive coordinates and unit value under
    ``linear_form`` (the all-ones form by default).  With ``base`` set, every
    ratio must be an integer power of it and values are exact logarithms in
    that base; otherwise natural logarithms are taken as floats and the
    result is flagged approximate.
    """
    vecs = [tuple(ext(c) for c in p) for p in points]
    if not vecs:
        raise ValueError("need at least one point")
    dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise ValueError("points have different dimensions")
    form = tuple(ext(c) for c in linear_form) if linear_form is not None else (Fraction(1),) * dim
    if len(form) != dim:
        raise ValueError("linear form has the wrong dimension")
    for k, v in enumerate(vecs):
        if any(not is_finite(c) or c <= 0 for c in v):
            raise ValueError(f"point {k} has a nonpositive coordinate")
        s = sum(a * c for a, c in zip(form, v))
        if not values_equal(s, Fraction(1)):
            raise ValueError(f"point {k} has linear-form value {s}, expected 1")
    labels = tuple(labels) if labels is not None else _default_labels(len(vecs))
    if base is not None:
        base = Fraction(base)
        if base <= 1:
            raise ValueError("log base must exceed 1")
    rows = []
    for x in vecs:
        row = []
        for y in vecs:
            ratio = max(Fraction(b) / Fraction(a) for a, b in zip(x, y))
            if base is None:
                row.append(math.log(ratio))
            else:
                k = _int_log(ratio, base)
                if k is None:
                    raise ValueError(f"ratio {ratio} is not an integer power of {base}")
                row.append(Fraction(k))
        rows.append(tuple(row))
    return WeakMetric(labels, tuple(rows), approximate=base is None,
                      log_base=base if base is not None else None)


def hilbert_metric(points, labels=None, base=None) -> WeakMetric:
    """Symmetrization of the Funk weak metric."""
    return funk_weak_metric(points, labels=labels, base=base).symmetrized()


def _vectors(points) -> list:
    return [tuple(ext(c) for c in p) if isinstance(p, (tuple, list)) else (ext(p),) for p in points]


def inner_product_kernel(primal_points, dual_points=None, x_labels=None, y_labels=None) -> Kernel:
    """``b(x, y) = <x, y>``; the dual points default to the primal ones."""
    xs = _vectors(primal_points)
    ys = _vectors(dual_points) if dual_points is not None else xs
    if len({len(v) for v in xs + ys}) != 1:
        raise ValueError("all points need the same dimension")
    x_labels = tuple(x_labels) if x_labels is not None else _default_labels(len(xs))
    y_labels = tuple(y_labels) if y_labels is not None else _default_labels(len(ys))
    rows = tuple(tuple(sum(a * b for a, b in zip(x, y)) for y in ys) for x in xs)
    return Kernel(x_labels, y_labels, rows)


def semiconvex_kernel(points, C, labels=None) -> Kernel:
    """``b(x, y) = -(C/2) |x - y|^2``."""
    C = ext(C)
    if not is_finite(C) or C <= 0:
        raise ValueError(f"C must be a positive number, got {C}")
    xs = _vectors(points)
    if len({len(v) for v in xs}) != 1:
        raise ValueError("all points need the same dimension")
    labels = tuple(labels) if labels is not None else _default_labels(len(xs))
    rows = tuple(tuple(-C / 2 * sum((a - b) ** 2 for a, b in zip(x, y)) for y in xs) for x in xs)
    return Kernel(labels, labels, rows)


def dirac_kernel(points: Sequence[Hashable]) -> Kernel:
    """``b(x, y) = 0`` if ``x == y`` else ``-inf``; its range is every vector with no +inf entry."""
    pts = tuple(points)
    rows = tuple(tuple(Fraction(0) if x == y else float("-inf") for y in pts) for x in pts)
    return Kernel(pts, pts, rows)
