"""Compiled per-point classification loops used by the batch engine.

The arithmetic here mirrors ``pipvec.geometry`` operation for operation so
that batch verdicts are bit-for-bit those of ``contains``.  Keep the two in
sync; ``tests/test_batch.py`` checks the agreement.
"""

import math

import numpy as np
from numba import njit

MODE_C1 = 0
MODE_C2 = 1
MODE_ROBUST = 2

OUTSIDE = 0
INSIDE = 1
BOUNDARY = 2
ERROR = -1


@njit(nogil=True, cache=True)
def _count_c1(px, py, verts, start, stop):
    count = 0
    for i in range(start, stop - 1):
        fi = verts[i, 1] - py
        fj = verts[i + 1, 1] - py
        if fj * fi <= 0:
            n_x = verts[i + 1, 1] - verts[i, 1]
            n_y = verts[i, 0] - verts[i + 1, 0]
            if n_x < 0:
                n_x = -n_x
                n_y = -n_y
            line_pos = (px - verts[i, 0]) * n_x + (py - verts[i, 1]) * n_y
            if line_pos <= 0:
                count += 1
    return count


@njit(nogil=True, cache=True)
def _count_c2(px, py, verts, start, stop):
    # returns -1 when a horizontal edge sits on the ray
    count = 0
    for i in range(start, stop - 1):
        fi = verts[i, 1] - py
        fj = verts[i + 1, 1] - py
        if fj * fi <= 0:
            d_x = verts[i + 1, 0] - verts[i, 0]
            d_y = verts[i + 1, 1] - verts[i, 1]
            if d_y == 0:
                return -1
            lam = (py - verts[i, 1]) / d_y
            x_new = verts[i, 0] + lam * d_x
            if x_new > px:
                count += 1
    return count


@njit(nogil=True, cache=True)
def _segment_distance(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    wx = px - ax
    wy = py - ay
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return math.sqrt(wx * wx + wy * wy)
    t = (wx * dx + wy * dy) / ll
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex = wx - t * dx
    ey = wy - t * dy
    return math.sqrt(ex * ex + ey * ey)


@njit(nogil=True, cache=True)
def _near_segment(px, py, ax, ay, bx, by, eps):
    if ay < by:
        lo_y, hi_y = ay, by
    else:
        lo_y, hi_y = by, ay
    if py < lo_y - eps or py > hi_y + eps:
        return False
    if ax < bx:
        lo_x, hi_x = ax, bx
    else:
        lo_x, hi_x = bx, ax
    if px < lo_x - eps or px > hi_x + eps:
        return False
    return _segment_distance(px, py, ax, ay, bx, by) <= eps


@njit(nogil=True, cache=True)
def _classify_robust(px, py, verts, offsets, eps):
    # single pass: boundary proximity and half-open crossings share the
    # y-band rejection (an edge outside the band can do neither)
    total = 0
    for r in range(offsets.shape[0] - 1):
        for i in range(offsets[r], offsets[r + 1] - 1):
            ya = verts[i, 1]
            yb = verts[i + 1, 1]
            if ya < yb:
                lo_y, hi_y = ya, yb
            else:
                lo_y, hi_y = yb, ya
            if py < lo_y - eps or py > hi_y + eps:
                continue
            xa = verts[i, 0]
            xb = verts[i + 1, 0]
            if _near_segment(px, py, xa, ya, xb, yb, eps):
                return BOUNDARY
            if (ya <= py and py < yb) or (yb <= py and py < ya):
                xc = xa + (py - ya) * (xb - xa) / (yb - ya)
                if px < xc:
                    total += 1
    return INSIDE if total % 2 == 1 else OUTSIDE


@njit(nogil=True, cache=True)
def classify_range(points, verts, offsets, bbox, mode, eps, out, lo, hi):
    """Classify ``points[lo:hi]`` into ``out[lo:hi]``."""
    min_x, min_y, max_x, max_y = bbox[0], bbox[1], bbox[2], bbox[3]
    n_rings = offsets.shape[0] - 1
    for k in range(lo, hi):
        px = points[k, 0]
        py = points[k, 1]
        if px < min_x or px > max_x or py < min_y or py > max_y:
            out[k] = OUTSIDE
            continue
        if mode == MODE_ROBUST:
            out[k] = _classify_robust(px, py, verts, offsets, eps)
            continue
        total = 0
        failed = False
        for r in range(n_rings):
            if mode == MODE_C1:
                c = _count_c1(px, py, verts, offsets[r], offsets[r + 1])
            else:
                c = _count_c2(px, py, verts, offsets[r], offsets[r + 1])
                if c < 0:
                    failed = True
                    break
            total += c
        if failed:
            out[k] = ERROR
        else:
            out[k] = INSIDE if total % 2 == 1 else OUTSIDE


def warm_up():
    """Force compilation of all kernel specialisations."""
    pts = np.zeros((1, 2))
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    offsets = np.array([0, 4], dtype=np.int64)
    bbox = np.array([0.0, 0.0, 1.0, 1.0])
    out = np.empty(1, dtype=np.int8)
    for mode in (MODE_C1, MODE_C2, MODE_ROBUST):
        classify_range(pts, verts, offsets, bbox, mode, 1e-12, out, 0, 1)
