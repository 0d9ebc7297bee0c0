# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``.

Node expansion works in 64-bit integers; ``kernels.py`` only routes inputs
here whose magnitudes are below its ``INT_LIMIT`` so no product can overflow.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, ceil, sqrt, fabs, hypot, INFINITY

ctypedef long long i64
ctypedef unsigned long long u64

from ._pykernels import ext_gcd


cdef inline i64 _iabs(i64 x) nogil:
    return -x if x < 0 else x


cdef inline i64 _imax(i64 x, i64 y) nogil:
    return x if x > y else y


cdef inline i64 _imin(i64 x, i64 y) nogil:
    return x if x < y else y


cdef bint _meets(i64 a, i64 br, i64 bi, i64 c,
                 i64 X0, i64 X1, i64 QX, i64 Y0, i64 Y1, i64 QY) nogil:
    cdef i64 t0, t1, s0, s1, cc, lo, hi, n, ex0, ex1, ey0, ey1
    cdef i64 dxm, dym, dxM, dyM, qx2, qy2, rr
    if a < 0:
        a = -a; br = -br; bi = -bi; c = -c
    if a == 0:
        t0 = -2 * br * X0 * QY
        t1 = -2 * br * X1 * QY
        s0 = -2 * bi * Y0 * QX
        s1 = -2 * bi * Y1 * QX
        cc = c * QX * QY
        lo = _imin(t0, t1) + _imin(s0, s1) + cc
        hi = _imax(t0, t1) + _imax(s0, s1) + cc
        return lo <= 0 and 0 <= hi
    n = br * br + bi * bi - a * c
    ex0 = a * X0 - br * QX
    ex1 = a * X1 - br * QX
    ey0 = a * Y0 - bi * QY
    ey1 = a * Y1 - bi * QY
    if ex0 > 0:
        dxm = ex0
    elif ex1 < 0:
        dxm = ex1
    else:
        dxm = 0
    if ey0 > 0:
        dym = ey0
    elif ey1 < 0:
        dym = ey1
    else:
        dym = 0
    dxM = _imax(_iabs(ex0), _iabs(ex1))
    dyM = _imax(_iabs(ey0), _iabs(ey1))
    qx2 = QX * QX
    qy2 = QY * QY
    rr = n * qx2 * qy2
    lo = qy2 * dxm * dxm + qx2 * dym * dym
    hi = qy2 * dxM * dxM + qx2 * dyM * dyM
    return lo <= rr and rr <= hi


def meets_box(i64 a, i64 br, i64 bi, i64 c, box):
    X0, X1, QX, Y0, Y1, QY = box
    return bool(_meets(a, br, bi, c, X0, X1, QX, Y0, Y1, QY))


cdef i64 _floordiv(i64 a, i64 b) nogil:
    cdef i64 q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


def expand_node(i64 ap, i64 br, i64 bi, i64 ac, box):
    cdef i64 X0, X1, QX, Y0, Y1, QY
    X0, X1, QX, Y0, Y1, QY = box
    cdef list out = []
    cdef i64 a, n, u, v, nbr, nbi, nac, u_lo, u_hi, v_lo, v_hi
    cdef i64 g, s1, s2, k, k_min, k_max, den, t0, t1, w0, w1, lo, hi
    cdef double r_ub, cx, cy
    if ac == 0:
        g, s1, s2 = ext_gcd(br, -bi)
        t0 = br * X0 * QY
        t1 = br * X1 * QY
        w0 = -bi * Y0 * QX
        w1 = -bi * Y1 * QX
        den = QX * QY
        lo = _imin(t0, t1) + _imin(w0, w1)
        hi = _imax(t0, t1) + _imax(w0, w1)
        k_min = -_floordiv(-(ap * den - hi), g * den)
        k_max = _floordiv(ap * den - lo, g * den)
        for k in range(k_min, k_max + 1):
            out.append((s1 * k, s2 * k, 0, br, -bi, ap - k * g))
        return out
    a = 2 * ac
    n = br * br + bi * bi - 4 * ap * ac
    r_ub = (floor(sqrt(<double>n)) + 2.0) / fabs(<double>a)
    cx = <double>br / a
    cy = -(<double>bi) / a
    u_lo = <i64>floor(cx - (<double>X1) / QX - r_ub) - 1
    u_hi = <i64>ceil(cx - (<double>X0) / QX + r_ub) + 1
    v_lo = <i64>floor(cy - (<double>Y1) / QY - r_ub) - 1
    v_hi = <i64>ceil(cy - (<double>Y0) / QY + r_ub) + 1
    for u in range(u_lo, u_hi + 1):
        nbr = br - a * u
        for v in range(v_lo, v_hi + 1):
            nbi = -bi - a * v
            nac = ac * (u * u + v * v) - (br * u - bi * v) + ap
            if _meets(a, nbr, nbi, 2 * nac, X0, X1, QX, Y0, Y1, QY):
                out.append((u, v, ac, nbr, nbi, nac))
    return out


def grid_hash(cnp.int64_t[:, :] circles, X, Y, i64 D, cnp.uint64_t[:] keys):
    cdef cnp.int64_t[:] xs = np.ascontiguousarray(X, dtype=np.int64)
    cdef cnp.int64_t[:] ys = np.ascontiguousarray(Y, dtype=np.int64)
    cdef Py_ssize_t m = xs.shape[0], nc = circles.shape[0], i, k
    h_arr = np.zeros(m, dtype=np.uint64)
    on_arr = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint64_t[:] h = h_arr
    cdef cnp.uint8_t[:] on = on_arr
    cdef i64 x, y, r2, val, D2 = D * D
    cdef u64 acc
    cdef cnp.uint8_t flag
    with nogil:
        for i in range(m):
            x = xs[i]
            y = ys[i]
            r2 = x * x + y * y
            acc = 0
            flag = 0
            for k in range(nc):
                val = circles[k, 0] * r2 - 2 * D * (circles[k, 1] * x + circles[k, 2] * y) + circles[k, 3] * D2
                if val > 0:
                    acc ^= keys[k]
                elif val == 0:
                    flag = 1
            h[i] = acc
            on[i] = flag
    return h_arr, on_arr.astype(bool)


def float_hash_dist(circles_in, zr_in, zi_in, cnp.uint64_t[:] keys):
    cdef double[:, :] circles = np.ascontiguousarray(circles_in, dtype=np.float64)
    cdef double[:] zr = np.ascontiguousarray(zr_in, dtype=np.float64)
    cdef double[:] zi = np.ascontiguousarray(zi_in, dtype=np.float64)
    cdef Py_ssize_t m = zr.shape[0], nc = circles.shape[0], i, k
    h_arr = np.zeros(m, dtype=np.uint64)
    d_arr = np.empty(m, dtype=np.float64)
    cdef cnp.uint64_t[:] h = h_arr
    cdef double[:] dist = d_arr
    # per-circle precomputation: center, radius or unit normal
    pre_arr = np.empty((nc, 4), dtype=np.float64)
    cdef double[:, :] pre = pre_arr
    cdef double a, br, bi, c, x, y, r2, val, d, best, nb
    for k in range(nc):
        a = circles[k, 0]; br = circles[k, 1]; bi = circles[k, 2]; c = circles[k, 3]
        if a == 0:
            nb = hypot(br, bi)
            pre[k, 0] = br / nb; pre[k, 1] = bi / nb; pre[k, 2] = c / (2 * nb); pre[k, 3] = 0
        else:
            pre[k, 0] = br / a; pre[k, 1] = bi / a
            pre[k, 2] = sqrt(br * br + bi * bi - a * c) / fabs(a); pre[k, 3] = 1
    cdef u64 acc
    with nogil:
        for i in range(m):
            x = zr[i]
            y = zi[i]
            r2 = x * x + y * y
            acc = 0
            best = INFINITY
            for k in range(nc):
                val = circles[k, 0] * r2 - 2 * (circles[k, 1] * x + circles[k, 2] * y) + circles[k, 3]
                if val > 0:
                    acc ^= keys[k]
                if pre[k, 3] == 0:
                    d = fabs(pre[k, 0] * x + pre[k, 1] * y - pre[k, 2])
                else:
                    d = fabs(hypot(x - pre[k, 0], y - pre[k, 1]) - pre[k, 2])
                if d < best:
                    best = d
            h[i] = acc
            dist[i] = best
    return h_arr, d_arr
