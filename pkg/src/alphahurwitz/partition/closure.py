"""Breadth-first closure of the boundary of U_alpha under z -> 1/z - w.

Every state is an integer triple ``(A_prev, B, A_cur)`` standing for the
generalized circle ``M(2 A_prev, B, 2 A_cur)``.  Taking the reciprocal and
translating by a Gaussian integer ``w`` maps it to

    A_prev' = A_cur
    B'      = conj(B) - 2 A_cur w
    A_cur'  = A_cur |w|^2 - Re(B w) + A_prev

and ``|B|^2 - 4 A_prev A_cur`` never changes along a chain.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .. import kernels
from ..cf_core import Alpha, DomainError
from ..exact_arith import GaussianInt, GaussianRational
from ..gencircle import (
    GenCircle,
    RationalBox,
    canonical_form,
    classify,
    CircleKind,
    integer_quadruple,
    intersects_box,
    translate,
)
from .._pykernels import ext_gcd
from .summary import Verdict, VerificationSummary

DEFAULT_MAX_NODES = 10**6
DEFAULT_MAX_DEPTH = 64


@dataclass
class ClosureNode:
    a_prev: int
    b: GaussianInt
    a_cur: int
    depth: int = 0
    parent: Optional[int] = None
    digit_from_parent: Optional[GaussianInt] = None
    seed: int = 0

    @property
    def triple(self) -> tuple[int, int, int, int]:
        return (self.a_prev, self.b.re, self.b.im, self.a_cur)

    @property
    def circle(self) -> GenCircle:
        return GenCircle(2 * self.a_prev, self.b, 2 * self.a_cur)

    def invariant(self) -> int:
        return self.b.norm() - 4 * self.a_prev * self.a_cur


def _check_alpha(alpha, force: bool = False) -> Alpha:
    if not isinstance(alpha, Alpha):
        alpha = Alpha(*alpha)
    if not isinstance(alpha.a1, Fraction) or not isinstance(alpha.a2, Fraction):
        raise DomainError("alpha must be rational")
    if not force:
        alpha.require_D()
    return alpha


def seed_circles(alpha, *, force: bool = False) -> list[ClosureNode]:
    """The four lines carrying the edges of U_alpha, as depth-0 nodes.

    With ``alpha = (p/q, r/s)`` in lowest terms these are ``M(0, q, 2p)``,
    ``M(0, q, 2(p - q))`` (``Re z = p/q`` and ``Re z = p/q - 1``) and
    ``M(0, s i, 2r)``, ``M(0, s i, 2(r - s))`` for the horizontal edges.
    """
    alpha = _check_alpha(alpha, force)
    p, q = alpha.a1.numerator, alpha.a1.denominator
    r, s = alpha.a2.numerator, alpha.a2.denominator
    specs = [
        (GaussianInt(q, 0), p),
        (GaussianInt(q, 0), p - q),
        (GaussianInt(0, s), r),
        (GaussianInt(0, s), r - s),
    ]
    return [ClosureNode(0, b, ac, depth=0, seed=k) for k, (b, ac) in enumerate(specs)]


def integer_box(alpha: Alpha) -> tuple[int, int, int, int, int, int]:
    p, q = alpha.a1.numerator, alpha.a1.denominator
    r, s = alpha.a2.numerator, alpha.a2.denominator
    return (p - q, p, q, r - s, r, s)


def _sqrt_sum_ge(n: int, x: Fraction, y: Fraction) -> bool:
    """Exact ``n <= sqrt(x) + sqrt(y)`` for ``n >= 0`` and rationals ``x, y >= 0``."""
    if n * n <= y:
        return True
    # n - sqrt(y) > 0 here; square both sides of n - sqrt(y) <= sqrt(x)
    lhs = n * n + y - x
    if lhs <= 0:
        return True
    return lhs * lhs <= 4 * n * n * y


@dataclass(frozen=True)
class RhoMinSq:
    """``rho_min^2 = (1 - sqrt(m))^2 / 4`` kept symbolically.

    ``m`` is the largest squared modulus over the closed square, attained at a
    corner.  ``rho_min`` is half the distance from the square to the unit
    circle.
    """

    m: Fraction

    @property
    def positive(self) -> bool:
        return self.m < 1

    def __float__(self) -> float:
        return (1 - math.sqrt(self.m)) ** 2 / 4

    @property
    def rho_min(self) -> float:
        return (1 - math.sqrt(self.m)) / 2

    def less_than(self, r2: Fraction) -> bool:
        """Exact ``rho_min^2 < r2``."""
        r2 = Fraction(r2)
        if not self.positive:
            return r2 > 0
        # rho_min < sqrt(r2)  <=>  1 < sqrt(m) + 2 sqrt(r2)
        return _sqrt_sum_ge(1, self.m, 4 * r2) and _sqrt_strict(self.m, 4 * r2)

    def n_alpha(self, b0_norm: int) -> Optional[int]:
        """``floor(|B_0| / (2 rho_min))``, or None when ``rho_min = 0``."""
        if not self.positive:
            return None
        # largest N with N (1 - sqrt(m)) <= sqrt(b0_norm), i.e. N <= sqrt(b0_norm) + sqrt(N^2 m)
        est = int(math.sqrt(b0_norm) / (1 - math.sqrt(self.m))) + 2
        n = est
        while n > 0 and not _sqrt_sum_ge(n, Fraction(b0_norm), n * n * self.m):
            n -= 1
        while _sqrt_sum_ge(n + 1, Fraction(b0_norm), (n + 1) ** 2 * self.m):
            n += 1
        return n


def _sqrt_strict(x: Fraction, y: Fraction) -> bool:
    """Exact ``1 < sqrt(x) + sqrt(y)``, given ``1 <= sqrt(x) + sqrt(y)``."""
    # 1 = sqrt(x) + sqrt(y) iff y <= 1 and 2 sqrt(y) = 1 + y - x
    t = 1 + y - x
    return not (y <= 1 and t >= 0 and t * t == 4 * y)


def rho_min_sq(alpha) -> RhoMinSq:
    alpha = alpha if isinstance(alpha, Alpha) else Alpha(*alpha)
    a1, a2 = alpha.a1, alpha.a2
    m = max(a1 * a1, (a1 - 1) ** 2) + max(a2 * a2, (a2 - 1) ** 2)
    return RhoMinSq(m)


def digit_candidates(h: GenCircle, alpha) -> list[GaussianInt]:
    """Gaussian integers ``w`` for which ``h - w`` meets the closed square.

    For a line, translates along the line direction coincide, so one ``w`` is
    returned per distinct translate.
    """
    alpha = alpha if isinstance(alpha, Alpha) else Alpha(*alpha)
    box = alpha.box
    geo = classify(h)
    out: list[GaussianInt] = []
    if geo.kind is CircleKind.LINE:
        a, x, y, c = integer_quadruple(h)
        # Re(conj(b) z) = c/2 - (x u + y v); x u + y v runs over g Z
        g, s1, s2 = ext_gcd(x, y)
        vals = [x * z.re + y * z.im for z in box.corners()]
        lo, hi = min(vals), max(vals)
        half_c = Fraction(c, 2)
        k_min = math.ceil((half_c - hi) / g)
        k_max = math.floor((half_c - lo) / g)
        for k in range(k_min, k_max + 1):
            w = GaussianInt(s1 * k, s2 * k)
            if intersects_box(translate(h, w), box):
                out.append(w)
        return out
    cx, cy = geo.center.re, geo.center.im
    r2 = geo.radius_sq
    r_ub = Fraction(math.isqrt(r2.numerator // r2.denominator + 1) + 1)
    for u in range(math.floor(cx - box.x_max - r_ub), math.ceil(cx - box.x_min + r_ub) + 1):
        for v in range(math.floor(cy - box.y_max - r_ub), math.ceil(cy - box.y_min + r_ub) + 1):
            w = GaussianInt(u, v)
            if intersects_box(translate(h, w), box):
                out.append(w)
    return out


@dataclass
class CircleSet:
    alpha: Alpha
    nodes: list[ClosureNode]
    by_seed: dict[int, list[int]] = field(default_factory=dict)

    def quadruples(self) -> list[tuple[int, int, int, int]]:
        """Canonical integer quadruples ``(a, Re b, Im b, c)``, sorted."""
        return sorted({integer_quadruple(n.circle) for n in self.nodes})

    @property
    def circles(self) -> list[GenCircle]:
        return [GenCircle(a, GaussianRational(br, bi), c) for a, br, bi, c in self.quadruples()]

    def __len__(self) -> int:
        return len(self.quadruples())

    def as_array(self) -> np.ndarray:
        q = self.quadruples()
        return np.array(q, dtype=np.int64).reshape(len(q), 4)

    def provenance(self, idx: int) -> list[dict]:
        chain = []
        cur: Optional[int] = idx
        while cur is not None:
            n = self.nodes[cur]
            chain.append(
                {
                    "node": cur,
                    "triple": list(n.triple),
                    "depth": n.depth,
                    "digit": n.digit_from_parent.to_pair() if n.digit_from_parent is not None else None,
                }
            )
            cur = n.parent
        return chain

    def without(self, quad) -> "CircleSet":
        """Copy with every node of the given canonical circle removed."""
        quad = tuple(quad)
        keep = [replace(n, parent=None) for n in self.nodes if integer_quadruple(n.circle) != quad]
        return CircleSet(self.alpha, keep, {})


@dataclass
class PartitionReport:
    alpha: Alpha
    circle_count: int
    node_count: int
    stabilized: bool
    rho_min_sq: RhoMinSq
    bound_applicable: bool
    n_alpha: Optional[int]
    b_norm_max: Optional[int]
    max_depth_reached: int = 0
    max_abs_a: int = 0
    bound_violations: int = 0
    cap_hit: Optional[str] = None
    cell_count: Optional[int] = None
    markov_check: Optional[VerificationSummary] = None
    timings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_strings(),
            "circle_count": self.circle_count,
            "node_count": self.node_count,
            "stabilized": self.stabilized,
            "cap_hit": self.cap_hit,
            "rho_min_sq": {"max_corner_norm_sq": _fmt(self.rho_min_sq.m), "approx": float(self.rho_min_sq)},
            "bound_applicable": self.bound_applicable,
            "n_alpha": self.n_alpha,
            "b_norm_max": self.b_norm_max,
            "max_abs_a": self.max_abs_a,
            "max_depth_reached": self.max_depth_reached,
            "bound_violations": self.bound_violations,
            "cell_count": self.cell_count,
            "markov_check": self.markov_check.to_json() if self.markov_check else None,
            "timings": self.timings,
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _expand_chunk(args):
    triples, box, backend = args
    return [kernels.expand_node(ap, br, bi, ac, box, backend=backend) for ap, br, bi, ac in triples]


def _seed_bounds(rho: RhoMinSq, seeds: list[ClosureNode]) -> dict[int, tuple[int, int]]:
    """Per seed: ``(N_alpha, max |B|^2)`` from the a priori finiteness bounds."""
    out = {}
    for s in seeds:
        n0 = s.invariant()
        n = rho.n_alpha(n0)
        if n is not None:
            out[s.seed] = (n, n0 + 4 * n * n)
    return out


def closure(
    alpha,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    *,
    workers: int = 1,
    tight: bool = False,
    backend: Optional[str] = None,
    force: bool = False,
) -> tuple[CircleSet, PartitionReport]:
    """Explore all generalized circles reachable from the boundary lines.

    Each level of the BFS is expanded (optionally by ``workers`` processes) and
    merged in frontier order, so the result does not depend on ``workers``.
    A child is kept when its triple and its canonical geometry are both new.
    Running into ``max_nodes`` or ``max_depth`` is reported through
    ``stabilized = False`` rather than raised.

    ``tight`` additionally drops translates that no point of the current
    circle inside the square can reach; that check samples arcs in floating
    point and is only a heuristic for smaller pictures.
    """
    alpha = _check_alpha(alpha, force)
    t_start = time.perf_counter()
    box = integer_box(alpha)
    seeds = seed_circles(alpha, force=force)
    nodes: list[ClosureNode] = []
    seen_triples: set = set()
    seen_geo: set = set()
    by_seed: dict[int, list[int]] = {}

    def add(node: ClosureNode) -> bool:
        t = node.triple
        if t in seen_triples:
            return False
        seen_triples.add(t)
        gkey = integer_quadruple(node.circle)
        if gkey in seen_geo:
            return False
        seen_geo.add(gkey)
        nodes.append(node)
        by_seed.setdefault(node.seed, []).append(len(nodes) - 1)
        return True

    for s in seeds:
        add(s)
    frontier = list(range(len(nodes)))
    rho = rho_min_sq(alpha)
    cap_hit = None
    depth = 0
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            triples = [nodes[i].triple for i in frontier]
            if pool is not None:
                size = max(1, math.ceil(len(triples) / (workers * 4)))
                chunks = [triples[k:k + size] for k in range(0, len(triples), size)]
                results = [r for part in pool.map(_expand_chunk, [(c, box, backend) for c in chunks]) for r in part]
            else:
                results = _expand_chunk((triples, box, backend))
            new_frontier = []
            for parent_id, children in zip(frontier, results):
                parent = nodes[parent_id]
                for u, v, nap, nbr, nbi, nac in children:
                    w = GaussianInt(u, v)
                    if tight and not _realizable(parent, w, alpha):
                        continue
                    child = ClosureNode(nap, GaussianInt(nbr, nbi), nac, depth + 1, parent_id, w, parent.seed)
                    if depth >= max_depth:
                        # probing past the depth cap: any new circle means we stopped early
                        if child.triple not in seen_triples and integer_quadruple(child.circle) not in seen_geo:
                            cap_hit = "max_depth"
                        continue
                    if add(child):
                        new_frontier.append(len(nodes) - 1)
                        if len(nodes) >= max_nodes:
                            cap_hit = "max_nodes"
                            break
                if cap_hit == "max_nodes":
                    break
            if cap_hit is not None:
                break
            frontier = new_frontier
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()

    cs = CircleSet(alpha, nodes, by_seed)
    bounds = _seed_bounds(rho, seeds)
    violations = 0
    for n in nodes:
        if n.seed in bounds:
            na, bmax = bounds[n.seed]
            if abs(n.a_prev) > na or abs(n.a_cur) > na or n.b.norm() > bmax:
                violations += 1
    n_alpha = max((b[0] for b in bounds.values()), default=None)
    b_norm_max = max((b[1] for b in bounds.values()), default=None)
    report = PartitionReport(
        alpha=alpha,
        circle_count=len(seen_geo),
        node_count=len(nodes),
        stabilized=cap_hit is None,
        rho_min_sq=rho,
        bound_applicable=rho.positive,
        n_alpha=n_alpha,
        b_norm_max=b_norm_max,
        max_depth_reached=max(n.depth for n in nodes),
        max_abs_a=max(max(abs(n.a_prev), abs(n.a_cur)) for n in nodes),
        bound_violations=violations,
        cap_hit=cap_hit,
        timings={"closure_s": round(time.perf_counter() - t_start, 6)},
    )
    return cs, report


def _realizable(parent: ClosureNode, w: GaussianInt, alpha: Alpha, tol: float = 1e-12) -> bool:
    from ..render import clip_to_box, sample_pieces

    a1, a2 = float(alpha.a1), float(alpha.a2)
    pieces = clip_to_box(parent.circle.to_float(), (a1 - 1, a1, a2 - 1, a2))
    wc = complex(w)
    for z in sample_pieces(pieces, 64):
        if z == 0:
            continue
        y = 1 / z - wc
        if a1 - 1 - tol <= y.real <= a1 + tol and a2 - 1 - tol <= y.imag <= a2 + tol:
            return True
    return False


def verify_closure_invariants(cs: CircleSet) -> VerificationSummary:
    """Exact checks of the conservation law, the radius law and the radius bounds.

    (i) ``|B|^2 - 4 A_prev A_cur == |B_0|^2`` of the seed; (ii) circles have
    ``radius^2 * 4 A_prev^2 == |B_0|^2``; (iii) when ``rho_min > 0``,
    ``rho_min^2 < radius^2 <= |B_0|^2 / 4``.
    """
    seeds = seed_circles(cs.alpha, force=True)
    b0 = {s.seed: s.invariant() for s in seeds}
    rho = rho_min_sq(cs.alpha)
    box = cs.alpha.box
    failures = []
    for idx, n in enumerate(cs.nodes):
        n0 = b0[n.seed]
        problems = []
        if n.invariant() != n0:
            problems.append("conservation")
        g = n.circle
        if n.a_prev != 0:
            r2 = classify(g).radius_sq
            if r2 * 4 * n.a_prev * n.a_prev != n0:
                problems.append("radius_law")
            if rho.positive and not (rho.less_than(r2) and r2 <= Fraction(n0, 4)):
                problems.append("radius_bounds")
        if not intersects_box(g, box):
            problems.append("box")
        if problems:
            failures.append({"problems": problems, "provenance": cs.provenance(idx)})
    return VerificationSummary(
        "closure_invariants",
        Verdict.PASS if not failures else Verdict.FAIL,
        checked=len(cs.nodes),
        failures=failures,
    )
