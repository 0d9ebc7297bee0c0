"""Dynamical coverage check: orbits of boundary points stay on closure circles.

Boundary points are drawn as rationals so that ``T_alpha`` can be iterated
without rounding; only the final distance to the nearest circle is measured
in floating point.  A float-only mode is kept for comparison, its error grows
roughly like ``prod |z_n|^-2`` along the orbit.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .. import kernels
from ..cf_core import Alpha, floor_alpha
from ..exact_arith import GaussianRational
from .cells import circle_keys
from .closure import CircleSet
from .summary import Verdict, VerificationSummary

SAMPLE_DENOMINATOR = 1 << 20


def boundary_samples(alpha: Alpha, n: int, *, seed: int = 0, denominator: int = SAMPLE_DENOMINATOR) -> list[GaussianRational]:
    """``n`` rational points spread over the four edges of the closed square."""
    rng = np.random.default_rng(seed)
    x0, x1 = alpha.a1 - 1, alpha.a1
    y0, y1 = alpha.a2 - 1, alpha.a2
    out = []
    per_edge = [n // 4 + (1 if k < n % 4 else 0) for k in range(4)]
    for edge, count in enumerate(per_edge):
        ts = rng.integers(0, denominator + 1, size=count)
        for t in ts.tolist():
            s = Fraction(t, denominator)
            if edge == 0:
                z = (x0 + s, y0)
            elif edge == 1:
                z = (x0 + s, y1)
            elif edge == 2:
                z = (x0, y0 + s)
            else:
                z = (x1, y0 + s)
            out.append(GaussianRational(*z))
    return out


def _orbit_exact(z: GaussianRational, alpha: Alpha, depth: int):
    points, digits = [z], []
    for _ in range(depth):
        if not z:
            break
        inv = z.reciprocal()
        w = floor_alpha(inv, alpha)
        z = inv - w
        digits.append(w.to_pair())
        points.append(z)
    return points, digits


def _orbit_float(z: complex, alpha: Alpha, depth: int):
    a1, a2 = float(alpha.a1), float(alpha.a2)
    points, digits = [z], []
    for _ in range(depth):
        if z == 0:
            break
        inv = 1 / z
        w = (math.floor(inv.real - a1) + 1, math.floor(inv.imag - a2) + 1)
        z = inv - complex(*w)
        digits.append(w)
        points.append(z)
    return points, digits


def boundary_orbit_oracle(
    alpha: Alpha,
    circle_set: CircleSet,
    boundary_samples_count: int = 10**4,
    depth: int = 8,
    tolerance: float = 1e-9,
    *,
    seed: int = 0,
    exact: bool = True,
    backend=None,
    collect_points: bool = False,
) -> VerificationSummary:
    """Every orbit point of a sampled boundary point must lie near a circle.

    With ``exact=True`` the orbit is exact and only the distance test is in
    floating point.  ``collect_points`` stores the covered iterates (as
    complex numbers) under ``details["points"]`` for realized-arc rendering.
    """
    starts = boundary_samples(alpha, boundary_samples_count, seed=seed)
    flat, owner, step = [], [], []
    histories = []
    for k, z in enumerate(starts):
        pts, digs = _orbit_exact(z, alpha, depth) if exact else _orbit_float(complex(z), alpha, depth)
        histories.append(digs)
        for s, p in enumerate(pts):
            if p == 0:
                continue  # the orbit has terminated
            flat.append(complex(p))
            owner.append(k)
            step.append(s)
    zs = np.array(flat, dtype=np.complex128)
    circles = circle_set.as_array()
    if circles.shape[0] == 0:
        dist = np.full(zs.shape, np.inf)
    else:
        _, dist = kernels.float_hash_dist(
            circles.astype(np.float64), zs.real, zs.imag, circle_keys(circles.shape[0]), backend=backend
        )
    bad = np.flatnonzero(~(dist <= tolerance))
    failures = []
    for i in bad.tolist():
        k, s = owner[i], step[i]
        failures.append(
            {
                "start": starts[k].to_strings(),
                "step": s,
                "point": [zs[i].real, zs[i].imag],
                "distance": float(dist[i]),
                "digits": [list(d) for d in histories[k][:s]],
            }
        )
    details = {
        "samples": len(starts),
        "depth": depth,
        "tolerance": tolerance,
        "mode": "exact" if exact else "float",
        "orbit_points": int(zs.size),
        "max_distance": float(dist.max()) if zs.size and np.isfinite(dist).all() else None,
    }
    if collect_points:
        details["points"] = zs
    verdict = Verdict.FAIL if failures else (Verdict.PASS if zs.size else Verdict.INCONCLUSIVE)
    return VerificationSummary("boundary_orbit", verdict, checked=int(zs.size), failures=failures, details=details)


def most_hit_circle(alpha: Alpha, circle_set: CircleSet, points: np.ndarray) -> Optional[tuple]:
    """Canonical quadruple of the circle closest to the most orbit points."""
    circles = circle_set.as_array()
    if circles.shape[0] == 0 or points.size == 0:
        return None
    counts = np.zeros(circles.shape[0], dtype=np.int64)
    best = np.full(points.shape, np.inf)
    arg = np.zeros(points.shape, dtype=np.int64)
    for k in range(circles.shape[0]):
        _, d = kernels.float_hash_dist(circles[k : k + 1].astype(np.float64), points.real, points.imag, circle_keys(1))
        closer = d < best
        best[closer] = d[closer]
        arg[closer] = k
    np.add.at(counts, arg, 1)
    return tuple(int(v) for v in circles[int(np.argmax(counts))])
