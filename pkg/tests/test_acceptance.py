"""Acceptance gate: one test, and one summary line, per criterion.

Tolerances and sample sizes are the pinned acceptance values; do not relax them.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction as F

import mpmath
import pytest

from alphahurwitz.cf_core import Alpha, convergents, evaluate_cf, expand
from alphahurwitz.cli import main
from alphahurwitz.exact_arith import GaussianInt as GI, GaussianRational as GR
from alphahurwitz.gencircle import classify
from alphahurwitz.partition import (
    Verdict,
    boundary_orbit_oracle,
    cell_decomposition,
    closure,
    rho_min_sq,
    seed_circles,
    verify_markov,
)
from alphahurwitz.real_cf import best_approx_check, gauss_expand

from conftest import REGRESSION_ALPHAS, cached_closure

RESULTS: dict[str, tuple[bool, str]] = {}

TIME_LIMIT_S = 60.0
ORACLE_SAMPLES, ORACLE_DEPTH, ORACLE_TOL = 10**4, 8, 1e-9
MARKOV_SAMPLES, MARKOV_TOL, MARKOV_GRID = 10**3, 1e-9, 600
EXACT_POINTS, MAX_DEN = 10**3, 50
FLOAT_POINTS, FLOAT_TOL, FLOAT_DEPTH = 10**3, 1e-8, 40
HURWITZ_RUNS, HURWITZ_DEPTH = 10**4, 20
FORBIDDEN = {GI(0), GI(1), GI(-1), GI(0, 1), GI(0, -1)}


def record(key: str, ok: bool, note: str) -> None:
    RESULTS[key] = (ok, note)
    assert ok, note


def _label(a) -> str:
    return f"({a[0]},{a[1]})"


def test_c01_partition_stabilizes():
    notes, ok = [], True
    for a in REGRESSION_ALPHAS:
        t0 = time.perf_counter()
        cs, report = closure(Alpha(*a))
        dt = time.perf_counter() - t0
        ok &= report.stabilized and dt < TIME_LIMIT_S
        notes.append(f"{_label(a)}: {len(cs)} circles {dt:.2f}s")
    record("C1 closure stabilizes under default caps, < 60 s", ok, "; ".join(notes))


def test_c02_conservation_law():
    bad, total = 0, 0
    for a in REGRESSION_ALPHAS:
        cs, _ = cached_closure(*a)
        b0 = {s.seed: s.b.norm() for s in seed_circles(Alpha(*a))}
        for n in cs.nodes:
            total += 1
            bad += n.b.norm() - 4 * n.a_prev * n.a_cur != b0[n.seed]
    record("C2 |B|^2 - 4 A_prev A_cur = |B0|^2 on every node", bad == 0, f"{total} nodes, {bad} violations")


def test_c03_radius_law_and_bounds():
    bad, total = 0, 0
    for a in REGRESSION_ALPHAS:
        cs, _ = cached_closure(*a)
        rho = rho_min_sq(Alpha(*a))
        b0 = {s.seed: s.b.norm() for s in seed_circles(Alpha(*a))}
        for n in cs.nodes:
            if n.a_prev == 0:
                continue
            total += 1
            r2 = classify(n.circle).radius_sq
            ok = r2 * 4 * n.a_prev**2 == b0[n.seed]
            if rho.positive:
                ok &= rho.less_than(r2) and r2 <= F(b0[n.seed], 4)
            bad += not ok
    cs, _ = cached_closure(F(1, 2), F(1, 2))
    max_a = max(max(abs(n.a_prev), abs(n.a_cur)) for n in cs.nodes)
    record(
        "C3 radius law exact, rho_min < r <= |B0|/2, Hurwitz |A| <= 6",
        bad == 0 and max_a <= 6,
        f"{total} circle nodes, {bad} violations, Hurwitz max |A| = {max_a}",
    )


def test_c04_boundary_orbit_oracle():
    notes, ok = [], True
    for a in REGRESSION_ALPHAS:
        cs, _ = cached_closure(*a)
        res = boundary_orbit_oracle(Alpha(*a), cs, ORACLE_SAMPLES, ORACLE_DEPTH, ORACLE_TOL)
        ok &= res.verdict is Verdict.PASS
        notes.append(f"{_label(a)}: {res.verdict.value} {res.checked} pts max d {res.details['max_distance']:.1e}")
    record("C4 boundary orbits covered (1e4 samples, depth 8, tol 1e-9)", ok, "; ".join(notes))


def test_c05_markov():
    notes, ok = [], True
    for a in [(F(1, 2), F(1, 2)), (F(2, 3), F(1, 2))]:
        cs, _ = cached_closure(*a)
        cells = cell_decomposition(cs, Alpha(*a), MARKOV_GRID)
        res = verify_markov(cells, Alpha(*a), MARKOV_SAMPLES, MARKOV_TOL)
        ok &= not res.failures and res.verdict is not Verdict.FAIL
        notes.append(f"{_label(a)}: {res.verdict.value} {cells.cell_count} cells {res.checked} pairs")
    record("C5 sampled Markov check has no FAIL", ok, "; ".join(notes))


def _exact_point(rng, alpha):
    while True:
        d1, d2 = rng.randint(1, MAX_DEN), rng.randint(1, MAX_DEN)
        z = GR(alpha.a1 - 1 + F(rng.randint(0, d1 - 1), d1), alpha.a2 - 1 + F(rng.randint(0, d2 - 1), d2))
        if alpha.contains(z):
            return z


def test_c06_expansion_correctness():
    rng = random.Random(2024)
    exact_bad = float_bad = 0
    for a in REGRESSION_ALPHAS:
        alpha = Alpha(*a)
        for _ in range(EXACT_POINTS):
            z = _exact_point(rng, alpha)
            e = expand(z, alpha, 500)
            exact_bad += not (e.terminated and (not z or evaluate_cf(e.digits) == z))
        x0, y0 = float(alpha.a1) - 1, float(alpha.a2) - 1
        for _ in range(FLOAT_POINTS):
            z = complex(x0 + rng.random(), y0 + rng.random())
            e = expand(z, alpha, FLOAT_DEPTH)
            best = min((abs(complex(c.p) / complex(c.q) - z) for c in convergents(e.digits)), default=abs(z))
            float_bad += not best < FLOAT_TOL
    record(
        "C6 exact reconstruction and float convergence (n <= 40, 1e-8)",
        exact_bad == 0 and float_bad == 0,
        f"exact failures {exact_bad}/{EXACT_POINTS * 5}, float failures {float_bad}/{FLOAT_POINTS * 5}",
    )


def test_c07_hurwitz_alphabet_and_forbidden_pair():
    rng = random.Random(77)
    alpha = Alpha(F(1, 2), F(1, 2))
    bad_digits = bad_pairs = 0
    for _ in range(HURWITZ_RUNS):
        e = expand(complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)), alpha, HURWITZ_DEPTH)
        bad_digits += sum(d in FORBIDDEN for d in e.digits)
        bad_pairs += sum(x == GI(2) and y == GI(-3) for x, y in zip(e.digits, e.digits[1:]))
    record(
        "C7 Hurwitz digits avoid {0, +-1, +-i}, no pair (2, -3)",
        bad_digits == 0 and bad_pairs == 0,
        f"{HURWITZ_RUNS} expansions: {bad_digits} bad digits, {bad_pairs} forbidden pairs",
    )


def test_c08_pi():
    with mpmath.workprec(256):
        x = mpmath.pi - 3
    digits = gauss_expand(x, 4).digits
    convs = [(c.p.re, c.q.re) for c in convergents([GI(d) for d in digits[:3]])]
    ok = digits == [7, 15, 1, 292] and convs == [(1, 7), (15, 106), (16, 113)]
    ok &= best_approx_check(x, 1, 7, 7) and best_approx_check(x, 15, 106, 106)
    record("C8 pi - 3 digits, convergents, best approximations", ok, f"digits {digits}, convergents {convs}")


def test_c09_figures(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [main(["all-figures", "--outdir", str(a)]), main(["all-figures", "--outdir", str(b)])]
    names = sorted(p.name for p in a.iterdir())
    identical = all((a / n).read_bytes() == (b / n).read_bytes() for n in names)
    wanted = {"alpha_1-2_1-2.svg", "alpha_2-3_1-2.svg", "alpha_2-3_2-3.svg", "alpha_1-5_3-5.svg", "CHECKLIST.md"}
    checklist = (a / "CHECKLIST.md").read_text() if (a / "CHECKLIST.md").exists() else ""
    ok = codes == [0, 0] and wanted <= set(names) and identical and "- [ ]" in checklist
    record("C9 figures regenerate byte-identically with a checklist", ok, f"{len(names)} files, identical={identical}")


def test_c10_worker_independence():
    diff = []
    for a in REGRESSION_ALPHAS:
        one, _ = closure(Alpha(*a), workers=1)
        eight, _ = closure(Alpha(*a), workers=8)
        if one.quadruples() != eight.quadruples():
            diff.append(_label(a))
    record("C10 closure identical for 1 and 8 workers", not diff, f"differences: {diff or 'none'}")
