"""Sampled cell decomposition of U_alpha and a sampled Markov-property check.

Cells are connected components (8-neighbour) of a ``grid x grid`` lattice of
rational points, grouped by their exact sign vector against every closure
circle.  Sign vectors are stored as 64-bit hashes: XOR of a fixed random key
per circle whose defining form is positive at the point.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .. import kernels
from ..cf_core import Alpha
from .summary import Verdict, VerificationSummary

OUTSIDE = -1
UNRESOLVED = -2
_KEY_SEED = 0x5EED_C1C1E


def circle_keys(n: int) -> np.ndarray:
    rng = np.random.default_rng(_KEY_SEED)
    return rng.integers(0, 2**63, size=n, dtype=np.uint64) * np.uint64(2) + np.uint64(1)


@dataclass
class CellDecomposition:
    alpha: Alpha
    grid: int
    circles: np.ndarray  # (N, 4) int64 canonical quadruples
    keys: np.ndarray
    points: np.ndarray  # (grid*grid,) complex, row-major with x fastest
    hashes: np.ndarray  # (grid*grid,) uint64
    labels: np.ndarray  # (grid*grid,) int
    cell_count: int
    jittered: int = 0
    hash_to_cells: dict = field(default_factory=dict)
    members: list = field(default_factory=list)
    _table: Optional[tuple] = field(default=None, repr=False)

    @property
    def representatives(self) -> list[complex]:
        return [complex(self.points[m[len(m) // 2]]) for m in self.members]

    def label_grid(self) -> np.ndarray:
        return self.labels.reshape(self.grid, self.grid)

    def locate(self, z: np.ndarray, tolerance: float = 1e-9, backend=None) -> np.ndarray:
        """Cell label of arbitrary points.

        ``OUTSIDE`` for points clearly outside the square, ``UNRESOLVED`` for
        points within ``tolerance`` of a circle or whose sign vector cannot be
        pinned to a single sampled cell.
        """
        z = np.asarray(z, dtype=np.complex128).ravel()
        out = np.full(z.shape, UNRESOLVED, dtype=np.int64)
        if z.size == 0:
            return out
        a1, a2 = float(self.alpha.a1), float(self.alpha.a2)
        x0, y0 = a1 - 1, a2 - 1
        outside = (z.real < x0 - tolerance) | (z.real > a1 + tolerance) | (z.imag < y0 - tolerance) | (z.imag > a2 + tolerance)
        out[outside] = OUTSIDE
        idx = np.flatnonzero(~outside)
        if idx.size == 0:
            return out
        zz = z[idx]
        h, dist = kernels.float_hash_dist(self.circles.astype(np.float64), zz.real, zz.imag, self.keys, backend=backend)
        ok = dist >= tolerance
        g = self.grid
        gi = np.clip(np.floor((zz.real - x0) * g).astype(np.int64), 0, g - 1)
        gj = np.clip(np.floor((zz.imag - y0) * g).astype(np.int64), 0, g - 1)
        res = np.full(idx.shape, UNRESOLVED, dtype=np.int64)
        uh, ucell = self._hash_table()
        pos = np.clip(np.searchsorted(uh, h), 0, max(uh.size - 1, 0))
        hit = ok & (uh.size > 0) & (uh[pos] == h)
        single = hit & (ucell[pos] >= 0)
        res[single] = ucell[pos[single]]
        amb = np.flatnonzero(hit & (ucell[pos] < 0))
        if amb.size:
            # several faces share this sign vector: consult nearby lattice points
            d = np.array([-1, 0, 1])
            jj = gj[amb, None, None] + d[None, :, None]
            ii = gi[amb, None, None] + d[None, None, :]
            inside = ((jj >= 0) & (jj < g) & (ii >= 0) & (ii < g)).reshape(amb.size, 9)
            flat = (np.clip(jj, 0, g - 1) * g + np.clip(ii, 0, g - 1)).reshape(amb.size, 9)
            match = inside & (self.hashes[flat] == h[amb, None])
            lab = self.labels[flat]
            big = np.iinfo(np.int64).max
            lo = np.where(match, lab, big).min(axis=1)
            hi = np.where(match, lab, -big).max(axis=1)
            unique = match.any(axis=1) & (lo == hi)
            res[amb[unique]] = lo[unique]
        out[idx] = res
        return out

    def _hash_table(self):
        """Sorted hashes and their cell, ``-1`` where a hash has several cells."""
        if getattr(self, "_table", None) is None:
            uh = np.array(sorted(self.hash_to_cells), dtype=np.uint64)
            ucell = np.array([c[0] if len(c) == 1 else -1 for c in (self.hash_to_cells[int(v)] for v in uh)], dtype=np.int64)
            self._table = (uh, ucell)
        return self._table

    def merged(self, keep: int, drop: int) -> "CellDecomposition":
        """Copy with cell ``drop`` folded into ``keep`` (labels renumbered)."""
        labels = self.labels.copy()
        labels[labels == drop] = keep
        return _finish(replace(self, labels=labels, _table=None), renumber=True)


def _lattice(alpha: Alpha, grid: int):
    p, q = alpha.a1.numerator, alpha.a1.denominator
    r, s = alpha.a2.numerator, alpha.a2.denominator
    L = q * s // math.gcd(q, s)
    D = 2 * grid * L
    i = np.arange(grid, dtype=np.int64)
    X = Fraction(p - q, q) * D + (2 * i + 1) * L
    Y = Fraction(r - s, s) * D + (2 * i + 1) * L
    X = np.array([int(v) for v in X], dtype=np.int64)
    Y = np.array([int(v) for v in Y], dtype=np.int64)
    return X, Y, D


def _exact_hash(quads, keys, x: Fraction, y: Fraction) -> tuple[int, bool]:
    h = 0
    zero = False
    r2 = x * x + y * y
    for k, (a, br, bi, c) in enumerate(quads):
        val = a * r2 - 2 * (br * x + bi * y) + c
        if val > 0:
            h ^= int(keys[k])
        elif val == 0:
            zero = True
    return h, zero


def cell_decomposition(circle_set, alpha: Alpha, grid: int = 600, backend=None) -> CellDecomposition:
    """Cells of the lattice sample of U_alpha cut out by ``circle_set``.

    Lattice points lying exactly on a circle are nudged diagonally by
    multiples of ``1/(10**7 grid)`` until they are off every circle.
    """
    quads = circle_set.quadruples() if hasattr(circle_set, "quadruples") else sorted(circle_set)
    circles = np.array(quads, dtype=np.int64).reshape(len(quads), 4)
    keys = circle_keys(len(quads))
    X, Y, D = _lattice(alpha, grid)
    big = int(np.abs(circles).max()) if len(quads) else 0
    if big * 8 * D * D >= 2**62:
        raise ValueError("grid too fine for exact 64-bit sign evaluation")
    XX = np.tile(X, grid)
    YY = np.repeat(Y, grid)
    hashes, on = kernels.grid_hash(circles, XX, YY, D, keys, backend=backend)
    points = (XX / D) + 1j * (YY / D)
    jittered = 0
    if on.any():
        delta = Fraction(1, 10**7 * grid)
        for k in np.flatnonzero(on):
            x, y = Fraction(int(XX[k]), D), Fraction(int(YY[k]), D)
            step = 1
            while True:
                h, zero = _exact_hash(quads, keys, x + step * delta, y + step * delta)
                if not zero:
                    break
                step += 1
            hashes[k] = h
            points[k] = complex(float(x + step * delta), float(y + step * delta))
            jittered += 1
        warnings.warn(f"{jittered} lattice points were on a circle and were jittered", RuntimeWarning, stacklevel=2)
    n = grid * grid
    idx = np.arange(n).reshape(grid, grid)
    H = hashes.reshape(grid, grid)
    right = H[:, :-1] == H[:, 1:]
    down = H[:-1, :] == H[1:, :]
    diag = H[:-1, :-1] == H[1:, 1:]
    anti = H[:-1, 1:] == H[1:, :-1]
    rows = np.concatenate([idx[:, :-1][right], idx[:-1, :][down], idx[:-1, :-1][diag], idx[:-1, 1:][anti]])
    cols = np.concatenate([idx[:, 1:][right], idx[1:, :][down], idx[1:, 1:][diag], idx[1:, :-1][anti]])
    adj = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    labels = _join_fragments(labels, hashes, XX, YY, D, quads, grid)
    cd = CellDecomposition(alpha, grid, circles, keys, points, hashes, labels, 0, jittered)
    return _finish(cd, renumber=True)


def _segment_clear(quads, z0: tuple[Fraction, Fraction], z1: tuple[Fraction, Fraction]) -> bool:
    """Exact: does the segment ``z0 z1`` avoid every circle?

    Both ends share a sign vector, so a circle can only be crossed if its form,
    a quadratic along the segment, changes sign at an interior extremum.
    """
    (x0, y0), (x1, y1) = z0, z1
    dx, dy = x1 - x0, y1 - y0
    for a, br, bi, c in quads:
        # F(t) = A t^2 + B t + C along the segment
        A = a * (dx * dx + dy * dy)
        B = 2 * a * (x0 * dx + y0 * dy) - 2 * (br * dx + bi * dy)
        C = a * (x0 * x0 + y0 * y0) - 2 * (br * x0 + bi * y0) + c
        if A == 0:
            continue
        t = -B / (2 * A)
        if 0 < t < 1:
            ft = C - B * B / (4 * A)
            if (ft > 0) != (C > 0) or ft == 0:
                return False
    return True


def _join_fragments(labels, hashes, XX, YY, D, quads, grid, reach: int = 4, tries: int = 6):
    """Merge same-hash components that a circle-free straight segment connects.

    Thin slivers between nearly tangent circles break into several lattice
    components; nearby pieces with equal sign vectors are tested with a few
    of their closest point pairs.
    """
    from scipy.spatial import cKDTree

    parent = list(range(int(labels.max()) + 1))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    comp_hash = {}
    for idx, lab in zip(range(labels.size), labels):
        comp_hash.setdefault(int(lab), int(hashes[idx]))
    groups: dict[int, list[int]] = {}
    for lab, h in comp_hash.items():
        groups.setdefault(h, []).append(lab)
    multi = [g for g in groups.values() if len(g) > 1]
    if not multi:
        return labels
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(len(parent) + 1))
    ij = np.stack([np.arange(labels.size) % grid, np.arange(labels.size) // grid], axis=1)
    for comps in multi:
        trees = {c: order[bounds[c]:bounds[c + 1]] for c in comps}
        kd = {c: cKDTree(ij[m]) for c, m in trees.items()}
        for n, c1 in enumerate(comps):
            for c2 in comps[n + 1:]:
                if find(c1) == find(c2):
                    continue
                m1, m2 = trees[c1], trees[c2]
                small, other = (m1, c2) if m1.size <= m2.size else (m2, c1)
                d, j = kd[other].query(ij[small], distance_upper_bound=reach * 1.5)
                cand = np.flatnonzero(np.isfinite(d))
                if cand.size == 0:
                    continue
                for k in cand[np.argsort(d[cand], kind="stable")][:tries]:
                    p1, p2 = small[k], trees[other][j[k]]
                    z0 = (Fraction(int(XX[p1]), D), Fraction(int(YY[p1]), D))
                    z1 = (Fraction(int(XX[p2]), D), Fraction(int(YY[p2]), D))
                    if _segment_clear(quads, z0, z1):
                        parent[find(c1)] = find(c2)
                        break
    roots = np.array([find(k) for k in range(len(parent))])
    return roots[labels]


def _finish(cd: CellDecomposition, renumber: bool) -> CellDecomposition:
    labels = cd.labels
    if renumber:
        # number cells by first appearance in row-major order
        _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
        order = np.argsort(first)
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        labels = rank[inv.ravel()]
    count = int(labels.max()) + 1 if labels.size else 0
    members = [[] for _ in range(count)]
    sort = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[sort], np.arange(count + 1))
    members = [sort[bounds[k]:bounds[k + 1]] for k in range(count)]
    hash_to_cells: dict[int, list[int]] = {}
    for k in range(count):
        for h in sorted({int(v) for v in cd.hashes[members[k]]}):
            hash_to_cells.setdefault(h, []).append(k)
    return replace(cd, labels=labels, cell_count=count, hash_to_cells=hash_to_cells, members=members, _table=None)


def verify_markov(
    cells: CellDecomposition,
    alpha: Optional[Alpha] = None,
    samples_per_cell: int = 1000,
    tolerance: float = 1e-9,
    *,
    seed: int = 0,
    backend=None,
    chunk: int = 1 << 20,
) -> VerificationSummary:
    """Sampled falsifier for ``T([b] ∩ P)`` being a union of cells.

    Forward: every lattice point ``x`` in cell ``P`` with digit ``b`` is mapped
    to ``T x`` in some cell ``Q``.  Backward: up to ``samples_per_cell``
    lattice points ``y`` of ``Q`` are pulled back along the branch,
    ``x = 1/(y + b)``.  If ``Q`` lies inside ``T([b] ∩ P)`` every pull-back is
    in ``P``; a pull-back landing in another cell, or outside the square,
    makes the pair ``(P, b)`` fail.  Points within ``tolerance`` of a circle
    are skipped rather than judged.
    """
    alpha = alpha or cells.alpha
    a1, a2 = float(alpha.a1), float(alpha.a2)
    z = cells.points
    P = cells.labels
    nz = z != 0
    inv = np.zeros_like(z)
    inv[nz] = 1 / z[nz]
    bre = np.floor(inv.real - a1).astype(np.int64) + 1
    bim = np.floor(inv.imag - a2).astype(np.int64) + 1
    tz = inv - (bre + 1j * bim)
    Q = cells.locate(tz[nz], tolerance, backend=backend)
    Pn, bre, bim = P[nz], bre[nz], bim[nz]
    good = Q >= 0
    triples = np.unique(np.stack([Pn[good], bre[good], bim[good], Q[good]], axis=1), axis=0)
    forward_unresolved = int((~good).sum())

    # pull back each distinct (b, Q) once
    bq = np.unique(triples[:, 1:], axis=0)
    rng = np.random.default_rng(seed)
    samples = []
    for m in cells.members:
        samples.append(m if len(m) <= samples_per_cell else np.sort(rng.choice(m, samples_per_cell, replace=False)))
    pull: dict[tuple[int, int, int], dict[int, int]] = {}
    batch_pts, batch_owner = [], []
    total = 0

    def flush():
        nonlocal batch_pts, batch_owner, total
        if not batch_pts:
            return
        pts = np.concatenate(batch_pts)
        owner = np.concatenate(batch_owner)
        lab = cells.locate(pts, tolerance, backend=backend)
        span = cells.cell_count + 2
        codes, counts = np.unique(owner * span + (lab + 2), return_counts=True)
        for code, c in zip(codes.tolist(), counts.tolist()):
            k, v = divmod(code, span)
            pull.setdefault(tuple(int(t) for t in bq[k]), {})[v - 2] = c
        batch_pts, batch_owner, total = [], [], 0

    for k, (br, bi, q) in enumerate(bq):
        ys = z[samples[q]]
        batch_pts.append(1 / (ys + complex(br, bi)))
        batch_owner.append(np.full(ys.size, k, dtype=np.int64))
        total += ys.size
        if total >= chunk:
            flush()
    flush()

    by_pair: dict[tuple[int, int, int], list[int]] = {}
    for p, br, bi, q in triples:
        by_pair.setdefault((int(p), int(br), int(bi)), []).append(int(q))
    failures, inconclusive, checked = [], 0, 0
    pair_results = {}
    for (p, br, bi), qs in sorted(by_pair.items()):
        bad, resolved = [], 0
        for q in qs:
            dist = pull[(br, bi, q)]
            resolved += sum(c for v, c in dist.items() if v != UNRESOLVED)
            wrong = {v: c for v, c in dist.items() if v not in (UNRESOLVED, p)}
            if wrong:
                bad.append({"image_cell": q, "pullback_cells": wrong, "in_P": dist.get(p, 0)})
        checked += 1
        if bad:
            failures.append({"cell": p, "digit": [br, bi], "images": qs, "bad": bad})
            pair_results[(p, br, bi)] = Verdict.FAIL
        elif resolved == 0:
            inconclusive += 1
            pair_results[(p, br, bi)] = Verdict.INCONCLUSIVE
        else:
            pair_results[(p, br, bi)] = Verdict.PASS
    if failures:
        verdict = Verdict.FAIL
    elif checked == 0 or inconclusive == checked:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    return VerificationSummary(
        "markov",
        verdict,
        checked=checked,
        failures=failures,
        details={
            "cells": cells.cell_count,
            "pairs": checked,
            "inconclusive_pairs": inconclusive,
            "image_pairs": int(bq.shape[0]),
            "forward_unresolved": forward_unresolved,
            "samples_per_cell": samples_per_cell,
            "tolerance": tolerance,
            "pair_results": {f"{p}:{br},{bi}": v.value for (p, br, bi), v in pair_results.items()},
        },
    )
