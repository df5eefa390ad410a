# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled geometry kernels: the Cython twin of ``_kernels_py``.

Same contracts, same tuple-based data layout; interval endpoints and flags
are unpacked into C doubles/bints inside the hot loops.
"""

from itertools import product

cdef double _INF = float("inf")


cdef inline object _isect(double alo, double ahi, bint alc, bint ahc,
                          double blo, double bhi, bint blc, bint bhc):
    cdef double lo, hi
    cdef bint lc, hc
    if alo > blo:
        lo = alo; lc = alc
    elif blo > alo:
        lo = blo; lc = blc
    else:
        lo = alo; lc = alc and blc
    if ahi < bhi:
        hi = ahi; hc = ahc
    elif bhi < ahi:
        hi = bhi; hc = bhc
    else:
        hi = ahi; hc = ahc and bhc
    if lo > hi:
        return None
    if lo == hi and not (lc and hc):
        return None
    return (lo, hi, lc, hc)


def itv_intersect(a, b):
    return _isect(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3])


def itv_subtract(a, b):
    cdef double alo = a[0], ahi = a[1], blo = b[0], bhi = b[1]
    cdef bint alc = a[2], ahc = a[3], blc = b[2], bhc = b[3]
    out = []
    left = _isect(alo, ahi, alc, ahc, -_INF, blo, False, not blc)
    if left is not None:
        out.append(left)
    right = _isect(alo, ahi, alc, ahc, bhi, _INF, not bhc, False)
    if right is not None:
        out.append(right)
    return out


cdef inline bint _itv_contains(tuple iv, double x):
    cdef double lo = iv[0], hi = iv[1]
    if x < lo or x > hi:
        return False
    if x == lo and not iv[2]:
        return False
    if x == hi and not iv[3]:
        return False
    return True


def itv_contains(iv, x):
    return _itv_contains(tuple(iv), x)


cdef object _box_intersect(tuple a, tuple b):
    cdef Py_ssize_t k, m = len(a)
    cdef tuple ia, ib
    out = []
    for k in range(m):
        ia = a[k]; ib = b[k]
        iv = _isect(ia[0], ia[1], ia[2], ia[3], ib[0], ib[1], ib[2], ib[3])
        if iv is None:
            return None
        out.append(iv)
    return tuple(out)


def box_intersect(a, b):
    return _box_intersect(tuple(a), tuple(b))


def box_subtract(a, b):
    cdef tuple ta = tuple(a), tb = tuple(b)
    cdef Py_ssize_t k, m = len(ta)
    inter = _box_intersect(ta, tb)
    if inter is None:
        return [ta]
    pieces = []
    core = list(ta)
    for k in range(m):
        for part in itv_subtract(core[k], tb[k]):
            pieces.append(tuple(core[:k]) + (part,) + ta[k + 1:])
        core[k] = inter[k]
    return pieces


cdef inline bint _box_contains(tuple box, tuple pt):
    cdef Py_ssize_t k, m = len(box)
    for k in range(m):
        if not _itv_contains(box[k], pt[k]):
            return False
    return True


def box_contains(box, pt):
    return _box_contains(tuple(box), tuple(pt))


def box_measure(box):
    cdef double v = 1.0
    cdef tuple iv
    for iv in box:
        v *= <double> iv[1] - <double> iv[0]
    return v


cdef object _mergeable(tuple a, tuple b):
    cdef Py_ssize_t k, diff = -1, m = len(a)
    for k in range(m):
        if a[k] != b[k]:
            if diff >= 0:
                return None
            diff = k
    if diff < 0:
        return None
    cdef tuple ia = a[diff], ib = b[diff]
    for lo_iv, hi_iv in ((ia, ib), (ib, ia)):
        if lo_iv[1] == hi_iv[0] and (lo_iv[3] or hi_iv[2]):
            merged = (lo_iv[0], hi_iv[1], lo_iv[2], hi_iv[3])
            return a[:diff] + (merged,) + a[diff + 1:]
    return None


def coalesce(boxes):
    cdef Py_ssize_t i, j, n
    cdef bint changed = True
    out = [tuple(b) for b in boxes]
    while changed:
        changed = False
        n = len(out)
        for i in range(n):
            for j in range(i + 1, n):
                m = _mergeable(out[i], out[j])
                if m is not None:
                    out[i] = m
                    del out[j]
                    changed = True
                    break
            if changed:
                break
    return out


def boxes_intersect(boxes_a, boxes_b):
    cdef tuple ta, tb
    out = []
    lb = [tuple(b) for b in boxes_b]
    for a in boxes_a:
        ta = tuple(a)
        for tb in lb:
            iv = _box_intersect(ta, tb)
            if iv is not None:
                out.append(iv)
    return out


def boxes_subtract(boxes_a, boxes_b):
    pieces = [tuple(b) for b in boxes_a]
    for b in boxes_b:
        tb = tuple(b)
        nxt = []
        for p in pieces:
            nxt.extend(box_subtract(p, tb))
        pieces = nxt
        if not pieces:
            break
    return pieces


def locate(boxes, owners, pt):
    cdef Py_ssize_t i, n = len(boxes)
    cdef tuple tpt = tuple(pt)
    for i in range(n):
        if _box_contains(boxes[i], tpt):
            return owners[i]
    return -1


def locate_grid(boxes, owners, axes):
    cdef Py_ssize_t i, n = len(boxes)
    cdef list lb = [tuple(b) for b in boxes]
    cdef list lo = list(owners)
    cdef tuple tpt
    cdef bint hit
    out = []
    for pt in product(*axes):
        tpt = pt
        hit = False
        for i in range(n):
            if _box_contains(<tuple> lb[i], tpt):
                out.append(lo[i])
                hit = True
                break
        if not hit:
            out.append(-1)
    return out
