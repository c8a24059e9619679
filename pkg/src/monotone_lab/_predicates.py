"""Exact 2D orientation predicates with a floating-point filter.

Degree computations return integers and must never flip sign because of
roundoff.  Every predicate here first evaluates in double precision with a
forward error bound; only nearly-degenerate cases fall back to exact
rational arithmetic (Python's Fraction on the exact binary values of the
input floats).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

# Forward error bound factor for the two-product difference in orient2d,
# following the standard (3 + 16*eps)*eps filter constant.
_ORIENT_ERRBOUND = 3.3306690738754716e-16


def orient2d_exact(ax, ay, bx, by, cx, cy) -> int:
    """Sign of the signed area of triangle (a, b, c), computed exactly."""
    ax, ay = Fraction(ax), Fraction(ay)
    bx, by = Fraction(bx), Fraction(by)
    cx, cy = Fraction(cx), Fraction(cy)
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def orient2d(a, b, c) -> int:
    """Sign of twice the signed area of triangle (a, b, c).

    Returns +1 for counterclockwise, -1 for clockwise, 0 for collinear.
    The result is exact for any finite double inputs.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    cx, cy = float(c[0]), float(c[1])
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if detleft > 0:
        if detright <= 0:
            return 1 if det != 0 else _sign(det)
        detsum = detleft + detright
    elif detleft < 0:
        if detright >= 0:
            return -1 if det != 0 else _sign(det)
        detsum = -detleft - detright
    else:
        return _sign(-detright)
    errbound = _ORIENT_ERRBOUND * detsum
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def _sign(x: float) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def orient2d_batch(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorized orient2d over broadcastable (..., 2) point arrays.

    Certain signs come from the float filter; uncertain entries are
    recomputed exactly one by one (rare for generic data).
    """
    ax, ay = a[..., 0], a[..., 1]
    bx, by = b[..., 0], b[..., 1]
    cx, cy = c[..., 0], c[..., 1]
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    errbound = _ORIENT_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    signs = np.sign(det).astype(np.int8)
    uncertain = np.abs(det) <= errbound
    if np.any(uncertain):
        ax_, ay_, bx_, by_, cx_, cy_ = np.broadcast_arrays(ax, ay, bx, by, cx, cy)
        idx = np.argwhere(uncertain)
        for ind in idx:
            t = tuple(ind)
            signs[t] = orient2d_exact(
                ax_[t], ay_[t], bx_[t], by_[t], cx_[t], cy_[t]
            )
    return signs


def on_segment(p, a, b) -> bool:
    """True iff p lies exactly on the closed segment [a, b]."""
    if orient2d(a, b, p) != 0:
        return False
    lox, hix = min(a[0], b[0]), max(a[0], b[0])
    loy, hiy = min(a[1], b[1]), max(a[1], b[1])
    return lox <= p[0] <= hix and loy <= p[1] <= hiy


def segments_intersect(p1, p2, p3, p4) -> bool:
    """True iff closed segments [p1,p2] and [p3,p4] intersect, exactly.

    Shared endpoints count as intersections; callers that want strict
    crossing must exclude adjacency themselves.
    """
    o1 = orient2d(p1, p2, p3)
    o2 = orient2d(p1, p2, p4)
    o3 = orient2d(p3, p4, p1)
    o4 = orient2d(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p3, p1, p2):
        return True
    if o2 == 0 and on_segment(p4, p1, p2):
        return True
    if o3 == 0 and on_segment(p1, p3, p4):
        return True
    if o4 == 0 and on_segment(p2, p3, p4):
        return True
    return False


def point_segment_distance(p, a, b) -> float:
    """Euclidean distance from p to the closed segment [a, b] (float)."""
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return float(np.hypot(px - ax, py - ay))
    t = ((px - ax) * dx + (py - ay) * dy) / L2
    t = min(1.0, max(0.0, t))
    return float(np.hypot(px - (ax + t * dx), py - (ay + t * dy)))


def point_segments_distance_batch(p, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances from a single point p to many segments A[i]->B[i]."""
    p = np.asarray(p, dtype=float)
    D = B - A
    L2 = np.einsum("ij,ij->i", D, D)
    L2safe = np.where(L2 == 0.0, 1.0, L2)
    t = np.einsum("ij,ij->i", p[None, :] - A, D) / L2safe
    t = np.clip(np.where(L2 == 0.0, 0.0, t), 0.0, 1.0)
    proj = A + t[:, None] * D
    return np.hypot(p[0] - proj[:, 0], p[1] - proj[:, 1])
