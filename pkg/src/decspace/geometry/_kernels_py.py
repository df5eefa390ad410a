"""Pure-Python geometry kernels.

Reference implementation of the hot primitives: all functions operate on
plain tuples so that the compiled twin in ``_kernels_cy`` can mirror them
line for line.  An interval is ``(lo, hi, lo_closed, hi_closed)``, a box is
a tuple of intervals (one per attribute), and a point is a sequence of
coordinates.

Empty intervals are represented by ``None`` return values, never by tuples.
A degenerate interval ``lo == hi`` is only valid when both endpoints are
closed (a point).
"""

from itertools import product

_INF = float("inf")


def itv_intersect(a, b):
    """Intersection of two intervals, or None when empty.

    An endpoint shared by a closed and an open bound is excluded; a
    measure-zero result survives only as a fully closed point.
    """
    alo, ahi, alc, ahc = a
    blo, bhi, blc, bhc = b
    if alo > blo:
        lo, lc = alo, alc
    elif blo > alo:
        lo, lc = blo, blc
    else:
        lo, lc = alo, alc and blc
    if ahi < bhi:
        hi, hc = ahi, ahc
    elif bhi < ahi:
        hi, hc = bhi, bhc
    else:
        hi, hc = ahi, ahc and bhc
    if lo > hi:
        return None
    if lo == hi and not (lc and hc):
        return None
    return (lo, hi, lc, hc)


def itv_subtract(a, b):
    """Set difference of intervals as a list of 0, 1, or 2 intervals."""
    out = []
    left = itv_intersect(a, (-_INF, b[0], False, not b[2]))
    if left is not None:
        out.append(left)
    right = itv_intersect(a, (b[1], _INF, not b[3], False))
    if right is not None:
        out.append(right)
    return out


def itv_contains(iv, x):
    lo, hi, lc, hc = iv
    if x < lo or x > hi:
        return False
    if x == lo and not lc:
        return False
    if x == hi and not hc:
        return False
    return True


def box_intersect(a, b):
    """Componentwise intersection of two boxes, or None when empty."""
    out = []
    for ia, ib in zip(a, b):
        iv = itv_intersect(ia, ib)
        if iv is None:
            return None
        out.append(iv)
    return tuple(out)


def box_subtract(a, b):
    """Difference of two boxes as a list of pairwise-disjoint boxes.

    Axis-sweep peel: per dimension the parts of ``a`` below and above ``b``
    are split off, then the core is narrowed to the intersection.  Yields at
    most two boxes per dimension.
    """
    inter = box_intersect(a, b)
    if inter is None:
        return [a]
    pieces = []
    core = list(a)
    for k in range(len(a)):
        for part in itv_subtract(core[k], b[k]):
            pieces.append(tuple(core[:k]) + (part,) + tuple(a[k + 1:]))
        core[k] = inter[k]
    return pieces


def box_contains(box, pt):
    for k in range(len(box)):
        if not itv_contains(box[k], pt[k]):
            return False
    return True


def box_measure(box):
    v = 1.0
    for lo, hi, _, _ in box:
        v *= hi - lo
    return v


def _mergeable(a, b):
    """Coalesce two boxes identical on all but one dimension and adjacent
    on the remaining one; returns the merged box or None."""
    diff = -1
    for k in range(len(a)):
        if a[k] != b[k]:
            if diff >= 0:
                return None
            diff = k
    if diff < 0:
        return None
    ia, ib = a[diff], b[diff]
    for lo_iv, hi_iv in ((ia, ib), (ib, ia)):
        if lo_iv[1] == hi_iv[0] and (lo_iv[3] or hi_iv[2]):
            merged = (lo_iv[0], hi_iv[1], lo_iv[2], hi_iv[3])
            return a[:diff] + (merged,) + a[diff + 1:]
    return None


def coalesce(boxes):
    """Canonicalize a disjoint box set by repeatedly merging adjacent boxes
    until a fixpoint is reached."""
    boxes = list(boxes)
    changed = True
    while changed:
        changed = False
        n = len(boxes)
        for i in range(n):
            for j in range(i + 1, n):
                m = _mergeable(boxes[i], boxes[j])
                if m is not None:
                    boxes[i] = m
                    del boxes[j]
                    changed = True
                    break
            if changed:
                break
    return boxes


def boxes_intersect(boxes_a, boxes_b):
    """All pairwise box intersections between two disjoint box sets."""
    out = []
    for a in boxes_a:
        for b in boxes_b:
            iv = box_intersect(a, b)
            if iv is not None:
                out.append(iv)
    return out


def boxes_subtract(boxes_a, boxes_b):
    """Set difference between two disjoint box sets."""
    pieces = list(boxes_a)
    for b in boxes_b:
        nxt = []
        for p in pieces:
            nxt.extend(box_subtract(p, b))
        pieces = nxt
        if not pieces:
            break
    return pieces


def locate(boxes, owners, pt):
    """Owner index of the first box containing ``pt``, or -1."""
    for i in range(len(boxes)):
        if box_contains(boxes[i], pt):
            return owners[i]
    return -1


def locate_grid(boxes, owners, axes):
    """Owner indices for every point of the cartesian grid ``axes``,
    iterated in row-major order."""
    return [locate(boxes, owners, pt) for pt in product(*axes)]
