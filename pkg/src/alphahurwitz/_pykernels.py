"""Pure Python / numpy implementations of the hot kernels.

Same signatures as the compiled ``_ckernels`` module; see ``kernels.py``.
Node expansion uses Python ints, so it is exact for any magnitude.
"""
from __future__ import annotations

import math

import numpy as np

# box = (X0, X1, QX, Y0, Y1, QY): closed square [X0/QX, X1/QX] x [Y0/QY, Y1/QY]


def meets_box(a: int, br: int, bi: int, c: int, box) -> bool:
    """Does ``M(a, br + i bi, c)`` (integer parameters) meet the closed box?"""
    X0, X1, QX, Y0, Y1, QY = box
    if a < 0:
        a, br, bi, c = -a, -br, -bi, -c
    if a == 0:
        # sign of -2 (br x + bi y) + c, scaled by QX * QY
        t0, t1 = -2 * br * X0 * QY, -2 * br * X1 * QY
        s0, s1 = -2 * bi * Y0 * QX, -2 * bi * Y1 * QX
        cc = c * QX * QY
        lo = min(t0, t1) + min(s0, s1) + cc
        hi = max(t0, t1) + max(s0, s1) + cc
        return lo <= 0 <= hi
    n = br * br + bi * bi - a * c
    ex0, ex1 = a * X0 - br * QX, a * X1 - br * QX
    ey0, ey1 = a * Y0 - bi * QY, a * Y1 - bi * QY
    dx_min = ex0 if ex0 > 0 else (ex1 if ex1 < 0 else 0)
    dy_min = ey0 if ey0 > 0 else (ey1 if ey1 < 0 else 0)
    dx_max = max(abs(ex0), abs(ex1))
    dy_max = max(abs(ey0), abs(ey1))
    qx2, qy2 = QX * QX, QY * QY
    rr = n * qx2 * qy2
    lo = qy2 * dx_min * dx_min + qx2 * dy_min * dy_min
    hi = qy2 * dx_max * dx_max + qx2 * dy_max * dy_max
    return lo <= rr <= hi


def ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``x s + y t = g = gcd(x, y) >= 0``."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def expand_node(ap: int, br: int, bi: int, ac: int, box) -> list[tuple[int, int, int, int, int, int]]:
    """Children ``(u, v, A_prev', Re B', Im B', A_cur')`` of the node ``(ap, B, ac)``.

    The node is the circle ``M(2 ap, B, 2 ac)``.  Its reciprocal is translated
    by every Gaussian integer ``w = u + iv`` whose translate meets the box;
    for a line reciprocal only one ``w`` per distinct translate is returned.
    """
    X0, X1, QX, Y0, Y1, QY = box
    out = []
    if ac == 0:
        # reciprocal is the line Re(B z) = ap; translates Re(B z) = ap - t, t in g Z
        g, s1, s2 = ext_gcd(br, -bi)
        # extremes of br x - bi y over the box, as fractions over QX QY
        t0, t1 = br * X0 * QY, br * X1 * QY
        s0, s1_ = -bi * Y0 * QX, -bi * Y1 * QX
        den = QX * QY
        lo = min(t0, t1) + min(s0, s1_)
        hi = max(t0, t1) + max(s0, s1_)
        # need ap - k g in [lo/den, hi/den]
        k_min = _ceil_div(ap * den - hi, g * den)
        k_max = (ap * den - lo) // (g * den)
        for k in range(k_min, k_max + 1):
            u, v = s1 * k, s2 * k
            out.append((u, v, 0, br, -bi, ap - k * g))
        return out
    a = 2 * ac
    n = br * br + bi * bi - 4 * ap * ac
    r_ub = (math.isqrt(n) + 1) / abs(a)
    cx, cy = br / a, -bi / a
    u_lo = math.floor(cx - X1 / QX - r_ub) - 1
    u_hi = math.ceil(cx - X0 / QX + r_ub) + 1
    v_lo = math.floor(cy - Y1 / QY - r_ub) - 1
    v_hi = math.ceil(cy - Y0 / QY + r_ub) + 1
    for u in range(u_lo, u_hi + 1):
        nbr = br - a * u
        for v in range(v_lo, v_hi + 1):
            nbi = -bi - a * v
            nac = ac * (u * u + v * v) - (br * u - bi * v) + ap
            if meets_box(a, nbr, nbi, 2 * nac, box):
                out.append((u, v, ac, nbr, nbi, nac))
    return out


def grid_hash(circles: np.ndarray, X: np.ndarray, Y: np.ndarray, D: int, keys: np.ndarray):
    """Signature hashes of lattice points ``(X + iY)/D`` against integer circles.

    ``circles`` is an ``(N, 4)`` int64 array of ``(a, Re b, Im b, c)``.  The
    hash XORs ``keys[k]`` for every circle whose defining form is positive.
    Also returns a flag per point that sits exactly on some circle.
    """
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    h = np.zeros(X.shape, dtype=np.uint64)
    on = np.zeros(X.shape, dtype=bool)
    r2 = X * X + Y * Y
    D = np.int64(D)
    D2 = D * D
    for k in range(circles.shape[0]):
        a, br, bi, c = (np.int64(v) for v in circles[k])
        val = a * r2 - 2 * D * (br * X + bi * Y) + c * D2
        h[val > 0] ^= keys[k]
        on |= val == 0
    return h, on


def float_hash_dist(circles: np.ndarray, zr: np.ndarray, zi: np.ndarray, keys: np.ndarray):
    """Float signature hash and distance to the nearest circle for each point."""
    zr = np.asarray(zr, dtype=np.float64)
    zi = np.asarray(zi, dtype=np.float64)
    h = np.zeros(zr.shape, dtype=np.uint64)
    dist = np.full(zr.shape, np.inf)
    r2 = zr * zr + zi * zi
    for k in range(circles.shape[0]):
        a, br, bi, c = (float(v) for v in circles[k])
        val = a * r2 - 2 * (br * zr + bi * zi) + c
        h[val > 0] ^= keys[k]
        if a == 0:
            d = np.abs(br * zr + bi * zi - c / 2) / math.hypot(br, bi)
        else:
            rad = math.sqrt(br * br + bi * bi - a * c) / abs(a)
            d = np.abs(np.hypot(zr - br / a, zi - bi / a) - rad)
        np.minimum(dist, d, out=dist)
    return h, dist
