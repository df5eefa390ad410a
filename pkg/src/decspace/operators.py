"""The algebra core: conflict-resolving merge, its m-ary and bias-free
streaming variants, the restriction operator, and their composites.

Conflicts are resolved by specialization-weighted averaging of the class
distributions; the weight of an element is the mean projected extent of its
region at the time the operator is applied.  Two elements conflict when
their regions share positive measure (shared faces between closed boxes are
not conflicts; the overlapping sliver is trimmed from the second operand so
outputs stay disjoint).  Point elements, whose measure is zero on every
axis, conflict when they coincide and are combined by unweighted averaging.
"""

from dataclasses import dataclass

from .geometry import Region
from .model import (
    ClassDistribution,
    DecisionSpace,
    Element,
    EQUALITY_TOL,
    specialization,
)


def _check_pair(a, b):
    if a.schema != b.schema:
        raise ValueError("schema mismatch between decision spaces")


def _merged_labels(a, b):
    if a.class_labels == b.class_labels:
        return a.class_labels
    union = set(a.class_labels) | set(b.class_labels)
    return tuple(sorted(union))


def subsumes(x, y):
    """True iff x subsumes y: y's region is contained in x's."""
    return y.region.issubset(x.region)


def _proj_intervals(region, k):
    return [b[k] for b in region.boxes]


def _union_1d(intervals):
    """Canonical 1-D union of (possibly overlapping) intervals with flags."""
    from .geometry import kernels as _k

    out = []
    for iv in sorted(intervals, key=lambda t: (t[0], not t[2])):
        if out:
            cur = out[-1]
            joined = _k.itv_intersect(cur, iv)
            touching = cur[1] == iv[0] and (cur[3] or iv[2])
            if joined is not None or touching:
                lo, lc = cur[0], cur[2]
                if iv[1] > cur[1]:
                    hi, hc = iv[1], iv[3]
                elif iv[1] < cur[1]:
                    hi, hc = cur[1], cur[3]
                else:
                    hi, hc = cur[1], cur[3] or iv[3]
                out[-1] = (lo, hi, lc, hc)
                continue
        out.append(tuple(iv))
    return out


def _subset_1d(a, b):
    """Is the 1-D union a contained in the 1-D union b?"""
    from .geometry import kernels as _k

    pieces = list(a)
    for iv in b:
        nxt = []
        for p in pieces:
            nxt.extend(_k.itv_subtract(p, iv))
        pieces = nxt
        if not pieces:
            return True
    return not pieces


def strictly_subsumes(x, y):
    """True iff x strictly subsumes y: on every attribute, y's projection is
    a proper subset of x's, strictly inside both extremes (a projection that
    reaches either end of x's extent is only ordinary containment)."""
    if x.region.is_empty or y.region.is_empty:
        return False
    for k in range(x.region.dim):
        px = _union_1d(_proj_intervals(x.region, k))
        py = _union_1d(_proj_intervals(y.region, k))
        if not _subset_1d(py, px):
            return False
        if py[0][0] == px[0][0] or py[-1][1] == px[-1][1]:
            return False
    return True


def _conflict_region(rx, ry):
    """The shared region when two element regions conflict, else None.

    Positive-measure overlap is a conflict; a measure-zero overlap only is
    when both regions are themselves measure-zero (coincident points)."""
    inter = rx & ry
    if inter.is_empty:
        return None
    if inter.measure() > 0:
        return inter
    if rx.measure() == 0 and ry.measure() == 0:
        return inter
    return None


def intersect_with_space(x, space):
    """All elements of the space whose region conflicts with x's."""
    return [y for y in space.elements if _conflict_region(x.region, y.region)]


def combine_values(values, masses):
    """Mass-weighted average of class distributions (the conflict value).

    All-zero masses are degenerate (every contributor is a point) and raise
    ValueError; merge resolves that case by unweighted averaging.
    """
    if len(values) != len(masses):
        raise ValueError("values and masses differ in length")
    if any(m < 0 for m in masses):
        raise ValueError("masses must be >= 0")
    total = sum(masses)
    if total == 0:
        raise ValueError("all-zero masses leave the weighted value undefined")
    labels = values[0].labels
    weights = [0.0] * len(labels)
    for v, m in zip(values, masses):
        share = m / total
        for i, w in enumerate(v.extended(labels).weights):
            weights[i] += w * share
    return ClassDistribution(labels, tuple(weights))


def _combine_pair(vx, vy, mx, my):
    if mx == 0 and my == 0:
        return combine_values([vx, vy], [1.0, 1.0])
    return combine_values([vx, vy], [mx, my])


@dataclass(frozen=True)
class IntersectionReport:
    """Conflict structure of a merge: the shared region per conflicting
    element pair and the leftover region per element of either space."""

    pairs: tuple  # (x index, y index, shared Region)
    x_remainders: dict  # x index -> Region
    y_remainders: dict  # y index -> Region


def intersection_report(x_space, y_space):
    _check_pair(x_space, y_space)
    pairs = []
    x_rem = {i: e.region for i, e in enumerate(x_space.elements)}
    y_rem = {j: e.region for j, e in enumerate(y_space.elements)}
    for i, x in enumerate(x_space.elements):
        for j, y in enumerate(y_space.elements):
            shared = _conflict_region(x.region, y.region)
            if shared is not None:
                pairs.append((i, j, shared))
                x_rem[i] = x_rem[i] - shared
                y_rem[j] = y_rem[j] - shared
    return IntersectionReport(tuple(pairs), x_rem, y_rem)


def _merge_binary(x_space, y_space, streaming, tol):
    _check_pair(x_space, y_space)
    labels = _merged_labels(x_space, y_space)
    X = x_space.with_labels(labels)
    Y = y_space.with_labels(labels)

    def dropped(e, others):
        return any(
            strictly_subsumes(o, e) and e.value.close_to(o.value, tol)
            for o in others
        )

    xs = [e for e in X.elements if not dropped(e, Y.elements)]
    ys = [e for e in Y.elements if not dropped(e, X.elements)]

    out = []
    covered = Region.empty()
    for x in xs:
        wx = x.mass if streaming else specialization(x.region)
        remainder = x.region
        had_conflict = False
        for y in ys:
            shared = _conflict_region(x.region, y.region)
            if shared is None:
                continue
            had_conflict = True
            wy = specialization(y.region)
            z = Element(
                shared,
                _combine_pair(x.value, y.value, wx, wy),
                wx + wy,
            )
            out.append(z)
            covered = covered | shared
            remainder = remainder - shared
        if not had_conflict:
            out.append(Element(x.region, x.value, x.mass if streaming
                               else specialization(x.region)))
            covered = covered | x.region
        elif not remainder.is_empty:
            out.append(Element(remainder, x.value, x.mass if streaming
                               else specialization(remainder)))
            covered = covered | remainder
    for y in ys:
        remainder = y.region - covered
        if not remainder.is_empty:
            out.append(Element(remainder, y.value, specialization(remainder)))
            covered = covered | remainder
    return DecisionSpace(X.schema, labels, tuple(out))


def merge(x_space, y_space, tol=EQUALITY_TOL):
    """Conflict-resolving merge of two decision spaces.

    Non-conflicting elements are copied; an element strictly subsumed by an
    opposite-space element of equal value is dropped; each conflict becomes
    an element on the shared region whose value is the specialization-
    weighted average.  The mass of a conflict element accumulates the
    contributors' specializations (consumed by the streaming variant).
    """
    return _merge_binary(x_space, y_space, streaming=False, tol=tol)


def merge_streaming(accumulator, next_space, tol=EQUALITY_TOL):
    """Bias-cancelling sequential merge.

    The accumulator's stored masses are the summed specializations of every
    space folded in so far, so each conflict is weighted by
    ``W / (W + M(y))``; folding m spaces this way is semantically equal to a
    single m-ary merge of all of them.
    """
    return _merge_binary(accumulator, next_space, streaming=True, tol=tol)


def merge_nary(spaces, tol=EQUALITY_TOL):
    """m-ary merge: on the overlay arrangement, every cell's value is the
    specialization-weighted average over all covering elements."""
    spaces = list(spaces)
    if not spaces:
        raise ValueError("merge_nary needs at least one decision space")
    first = spaces[0]
    for sp in spaces[1:]:
        _check_pair(first, sp)
    labels = first.class_labels
    for sp in spaces[1:]:
        if sp.class_labels != labels:
            union = set()
            for s in spaces:
                union |= set(s.class_labels)
            labels = tuple(sorted(union))
            break
    spaces = [sp.with_labels(labels) for sp in spaces]

    kept = []  # (space index, element)
    for i, sp in enumerate(spaces):
        for e in sp.elements:
            discard = any(
                strictly_subsumes(o, e) and e.value.close_to(o.value, tol)
                for j, other in enumerate(spaces)
                if j != i
                for o in other.elements
            )
            if not discard:
                kept.append(e)

    frags = []  # (Region, [(value, specialization)])
    covered = Region.empty()
    for e in kept:
        w = specialization(e.region)
        nxt = []
        for reg, contribs in frags:
            shared = _conflict_region(reg, e.region)
            if shared is None:
                nxt.append((reg, contribs))
                continue
            nxt.append((shared, contribs + [(e.value, w)]))
            rest = reg - shared
            if not rest.is_empty:
                nxt.append((rest, contribs))
        remainder = e.region - covered
        if not remainder.is_empty:
            nxt.append((remainder, [(e.value, w)]))
        covered = covered | e.region
        frags = nxt

    out = []
    for reg, contribs in frags:
        if len(contribs) == 1:
            value = contribs[0][0]
            out.append(Element(reg, value, specialization(reg)))
        else:
            values = [v for v, _ in contribs]
            masses = [m for _, m in contribs]
            if sum(masses) == 0:
                masses = [1.0] * len(masses)
            out.append(Element(reg, combine_values(values, masses), sum(m for _, m in contribs)))
    return DecisionSpace(first.schema, labels, tuple(out))


def restrict(x_space, y_space):
    """Trim a space to the footprint of another; values and masses are kept.

    Elements of the first space that do not intersect the second space's
    footprint are dropped.
    """
    _check_pair(x_space, y_space)
    footprint = y_space.covered_region()
    out = []
    for x in x_space.elements:
        if (x.region - footprint).is_empty:
            out.append(x)  # fully retained: keep the decomposition verbatim
            continue
        shared = x.region & footprint
        if not shared.is_empty:
            out.append(Element(shared, x.value, x.mass))
    return DecisionSpace(x_space.schema, x_space.class_labels, tuple(out))


def op_plus(x_space, y_space, tol=EQUALITY_TOL):
    """Merge restricted to the common footprint: (X merge Y) restricted by X
    then by Y, so every output element is backed by both inputs."""
    return restrict(restrict(merge(x_space, y_space, tol), x_space), y_space)


def op_barodot(x_space, y_space, tol=EQUALITY_TOL):
    """Restrict both spaces to each other first, then merge, so conflict
    weights are measured on the common footprint only."""
    return merge(restrict(x_space, y_space), restrict(y_space, x_space), tol)
