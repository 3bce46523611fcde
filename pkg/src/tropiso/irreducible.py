"""Irreducible elements of kernel ranges.

Covers redundant and essential columns, fully reduced kernels, relative
infima, sound refuters for inf- and sup-irreducibility, Archimedean classes
of the ``e_x``, and minimal elements of ``S(x) = {u in Rg(B) | u(x) >= 0}``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    NEG_INF,
    POS_INF,
    TropVector,
    archimedean_leq,
    is_finite,
    lower_add,
    pointwise_inf,
    pointwise_sup,
    upper_sub,
    values_equal,
)
from .kernel import (
    Kernel,
    _require_square,
    e_x_vector,
    project,
    range_membership,
    strict_trop_monotone,
)


class NotInRangeError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionReport:
    """Which columns of a kernel are needed to generate its range.

    ``redundant_columns`` maps each redundant representative to coefficients
    over the other representatives that rebuild it.  ``duplicate_classes``
    lists the groups of columns equal up to an additive constant; the first
    label of a group is its representative.
    """

    essential_columns: tuple
    redundant_columns: dict
    duplicate_classes: tuple
    has_neg_inf: bool = False
    labels: tuple = field(default=(), repr=False)

    @property
    def duplicates(self) -> tuple:
        """Labels that were folded into their class representative."""
        return tuple(lab for cls in self.duplicate_classes for lab in cls[1:])

    @property
    def is_reduced(self) -> bool:
        return not self.redundant_columns and not self.duplicates


def residuate(c: Sequence, f: Sequence):
    """Largest ``lam`` with ``c + lam <= f``, i.e. ``inf_i f_i - c_i``.

    Coordinates where ``c`` is -inf impose no constraint; the result is +inf
    when no coordinate does.
    """
    return min((upper_sub(b, a) for a, b in zip(c, f)), default=POS_INF)


def equal_up_to_constant(c: Sequence, d: Sequence) -> bool:
    """Same infinite entries and a constant gap on the finite ones."""
    if any((is_finite(a) or is_finite(b)) and not (is_finite(a) and is_finite(b))
           or (not is_finite(a) and a != b) for a, b in zip(c, d)):
        return False
    diffs = [a - b for a, b in zip(c, d) if is_finite(a)]
    return all(values_equal(t, diffs[0]) for t in diffs)


def _duplicate_classes(cols: Sequence[tuple], labels: tuple) -> list:
    classes = []
    for lab, c in zip(labels, cols):
        for cls in classes:
            if equal_up_to_constant(cols[labels.index(cls[0])], c):
                cls.append(lab)
                break
        else:
            classes.append([lab])
    # the lexicographically smallest label represents its class
    return [[min(cls)] + [lab for lab in cls if lab != min(cls)] for cls in classes]


def essential_columns(B: Kernel) -> ReductionReport:
    """Split the columns of ``B`` into essential, redundant and duplicate ones.

    Duplicates (equal up to a constant) collapse to the smallest label.  A
    remaining column ``c_j`` is redundant when ``sup_l lam_l + c_l = c_j``
    over the other representatives, with ``lam_l`` the residuated scalar.
    """
    labels = B.y_points
    cols = [B.column(y).values for y in labels]
    classes = _duplicate_classes(cols, labels)
    reps = [cls[0] for cls in classes]
    by_label = dict(zip(labels, cols))
    essential, redundant = [], {}
    for j in reps:
        others = [l for l in reps if l != j]
        target = by_label[j]
        if not others:
            essential.append(j)
            continue
        lams = [residuate(by_label[l], target) for l in others]
        rebuilt = tuple(max(lower_add(lam, by_label[l][i]) for lam, l in zip(lams, others))
                        for i in range(len(target)))
        if all(values_equal(a, b) for a, b in zip(rebuilt, target)):
            redundant[j] = TropVector(tuple(others), tuple(lams))
        else:
            essential.append(j)
    return ReductionReport(tuple(essential), redundant, tuple(tuple(c) for c in classes),
                           B.has_neg_inf(), labels)


def essential_rows(B: Kernel) -> ReductionReport:
    return essential_columns(B.transpose())


def fully_reduced(B: Kernel) -> bool:
    """Rows and columns are all essential and pairwise independent."""
    return essential_columns(B).is_reduced and essential_rows(B).is_reduced


def _require_member(B: Kernel, f: TropVector, what: str = "vector") -> TropVector:
    f = TropVector(B.x_points, f.aligned(B.x_points)) if isinstance(f, TropVector) \
        else TropVector(B.x_points, tuple(f))
    if not range_membership(B, f):
        raise NotInRangeError(f"{what} {f} is not in the range of the kernel")
    return f


def relative_inf(B: Kernel, fs: Sequence[TropVector]) -> TropVector:
    """Greatest element of ``Rg(B)`` below every ``f`` in ``fs``."""
    fs = [_require_member(B, f, f"input {k}") for k, f in enumerate(fs)]
    if not fs:
        raise ValueError("need at least one vector")
    return project(B, pointwise_inf(fs))


def _generators(B: Kernel) -> list:
    gens = [B.column(y) for y in B.y_points]
    gens += [e_x_vector(B, x) for x in B.x_points]
    out = []
    for g in gens:
        if g not in out:
            out.append(g)
    return out


def _scalar_grid(points: set) -> list:
    """Breakpoints, their midpoints and one step beyond each end."""
    pts = sorted(points)
    if not pts:
        return [Fraction(0)]
    grid = set(pts)
    grid.update((a + b) / 2 for a, b in zip(pts, pts[1:]))
    grid.update({pts[0] - 1, pts[-1] + 1})
    return sorted(grid)


def _dedupe(vectors) -> list:
    out = []
    for v in vectors:
        if v not in out:
            out.append(v)
    return out


def _pairs(n: int, budget: int, seed: int):
    total = n * (n - 1) // 2
    if total <= budget:
        yield from itertools.combinations(range(n), 2)
        return
    rng = random.Random(seed)
    seen = set()
    while len(seen) < budget:
        i, j = sorted(rng.sample(range(n), 2))
        if (i, j) not in seen:
            seen.add((i, j))
            yield i, j


def inf_candidates(B: Kernel, f: TropVector) -> list:
    """Range elements above ``f`` and different from it."""
    gens = _generators(B)
    fv = f.values
    cands = []
    for c in gens:
        bps = {b - a for a, b in zip(c.values, fv) if is_finite(a) and is_finite(b)}
        for lam in _scalar_grid(bps):
            cands.append(pointwise_sup([f, c.shift(lam)]))
    cols = [B.column(y) for y in B.y_points]
    for p, q in itertools.combinations(range(len(cols)), 2):
        cp, cq = cols[p].values, cols[q].values
        bp = {b - a for a, b in zip(cp, fv) if is_finite(a) and is_finite(b)}
        bq = {b - a for a, b in zip(cq, fv) if is_finite(a) and is_finite(b)}
        for s in _scalar_grid(bp):
            for t in _scalar_grid(bq):
                g = pointwise_sup([cols[p].shift(s), cols[q].shift(t)])
                if g >= f:
                    cands.append(g)
    return [g for g in _dedupe(cands) if g != f]


def refute_inf_irreducible(B: Kernel, f: TropVector, budget: int = 20000,
                           seed: int = 0) -> Optional[tuple]:
    """Search for ``g, h`` in ``Rg(B)``, both different from ``f``, whose relative inf is ``f``.

    Sound but incomplete: any returned pair is checked exactly, while
    ``None`` only means the candidate grammar held no witness.
    """
    f = _require_member(B, f, "f")
    cands = inf_candidates(B, f)
    for i, j in _pairs(len(cands), budget, seed):
        g, h = cands[i], cands[j]
        if project(B, pointwise_inf([g, h])) == f:
            return g, h
    return None


def sup_candidates(B: Kernel, f: TropVector) -> list:
    """Range elements below ``f`` and different from it."""
    cands = []
    for c in _generators(B):
        lam = residuate(c.values, f.values)
        if is_finite(lam):
            cands.append(c.shift(lam))
    bound = _finite_bound([f.values] + list(B.entries))
    for k, z in enumerate(f.points):
        if f[z] == NEG_INF:
            continue
        if f[z] == POS_INF:
            lowered = [Fraction(t) for t in (-bound, 0, bound, 3 * bound + 1)]
        else:
            lowered = [f[z] - d for d in _scalar_grid({abs(a - b) for row in B.entries
                                                       for a in row for b in row
                                                       if is_finite(a) and is_finite(b)}) if d > 0]
        for t in lowered:
            h = list(f.values)
            h[k] = t
            cands.append(project(B, TropVector(f.points, tuple(h))))
    return [g for g in _dedupe(cands) if g != f and g <= f]


def refute_sup_irreducible(B: Kernel, f: TropVector, budget: int = 20000,
                           seed: int = 0) -> Optional[tuple]:
    """Search for ``g, h`` in ``Rg(B)``, both different from ``f``, with ``sup(g, h) = f``."""
    f = _require_member(B, f, "f")
    cands = sup_candidates(B, f)
    for i, j in _pairs(len(cands), budget, seed):
        g, h = cands[i], cands[j]
        if pointwise_sup([g, h]) == f:
            return g, h
    return None


@dataclass(frozen=True)
class ArchClass:
    members: tuple
    maximal: bool


def archimedean_classes(B: Kernel) -> list:
    """Partition of ``X`` by the Archimedean class of ``e_x``, in input order."""
    es = {x: e_x_vector(B, x) for x in B.x_points}
    groups = []
    for x in B.x_points:
        for grp in groups:
            if archimedean_leq(es[grp[0]], es[x]).leq and archimedean_leq(es[x], es[grp[0]]).leq:
                grp.append(x)
                break
        else:
            groups.append([x])
    out = []
    for grp in groups:
        e = es[grp[0]]
        dominated = any(archimedean_leq(e, es[o[0]]).leq and not archimedean_leq(es[o[0]], e).leq
                        for o in groups if o is not grp)
        out.append(ArchClass(tuple(grp), not dominated))
    return out


def archimedean_maximal(B: Kernel, f: TropVector) -> bool:
    """Whether ``[f]`` equals a maximal class ``[e_x]`` for some ``x`` in ``Dom(f)``."""
    f = _require_member(B, f, "f")
    dom = [x for x in f.points if f[x] < POS_INF]
    if not dom:
        raise ValueError("f has empty domain")
    classes = archimedean_classes(B)
    maximal = {x for cls in classes if cls.maximal for x in cls.members}
    for x in dom:
        if x not in maximal:
            continue
        e = e_x_vector(B, x)
        if archimedean_leq(f, e).leq and archimedean_leq(e, f).leq:
            return True
    return False


def min_S_candidate(B: Kernel, x) -> TropVector:
    """``b(., x) - b(x, x)``, a minimal element of ``S(x)`` for strictly monotone kernels."""
    _require_square(B, "min_S_candidate")
    if not strict_trop_monotone(B):
        raise ValueError("kernel is not strictly tropically monotone")
    return B.column(x).shift(-B.entry(x, x))


def _finite_bound(rows) -> Fraction:
    vals = [abs(v) for row in rows for v in row if is_finite(v)]
    return max(vals, default=Fraction(0)) + 1


def _scan_step(rows) -> object:
    vals = [v for row in rows for v in row if is_finite(v)]
    if all(isinstance(v, Fraction) for v in vals):
        lcm = 1
        for v in vals:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        return Fraction(1, 2 * lcm)
    return 1e-6


def is_minimal_in_S(B: Kernel, u: TropVector, x) -> bool:
    """Whether ``u`` is minimal in ``S(x) = {v in Rg(B) | v(x) >= 0}``.

    Lowers ``u`` at one coordinate, projects back onto the range and asks
    whether the result still satisfies ``v(x) >= 0``.  The projected value at
    ``x`` is monotone and piecewise linear in the amount removed, with
    breakpoints on the lattice generated by the entries, so one step smaller
    than the lattice spacing decides it.
    """
    u = _require_member(B, u, "u")
    if not u[x] >= 0:
        raise ValueError(f"u({x!r}) = {u[x]} is negative, so u is not in S(x)")
    rows = [u.values] + list(B.entries)
    step = _scan_step(rows)
    far = 10 * _finite_bound(rows)
    for k, z in enumerate(u.points):
        if u[z] == NEG_INF:
            continue
        h = list(u.values)
        h[k] = far if u[z] == POS_INF else u[z] - step
        v = project(B, TropVector(u.points, tuple(h)))
        if v[x] >= 0 and v != u:
            return False
    return True
