from __future__ import annotations

import collections
from fractions import Fraction as F

import numpy as np
import pytest

from alphahurwitz import kernels
from alphahurwitz.cf_core import Alpha
from alphahurwitz.partition import Verdict, cell_decomposition, verify_markov
from alphahurwitz.partition.cells import OUTSIDE, UNRESOLVED

from conftest import cached_closure

H = Alpha(F(1, 2), F(1, 2))

# established by running the decomposition at grid 300 and 600; nothing smaller moves it
HURWITZ_CELLS = 12


@pytest.fixture(scope="module")
def hurwitz_cells(hurwitz_closure):
    cs, _ = hurwitz_closure
    return cell_decomposition(cs, H, 600)


def _adjacent_pair(cd):
    lg = cd.label_grid()
    pairs = collections.Counter()
    d = lg[:, :-1] != lg[:, 1:]
    for x, y in zip(lg[:, :-1][d], lg[:, 1:][d]):
        pairs[(min(x, y), max(x, y))] += 1
    (x, y), _ = pairs.most_common(1)[0]
    return int(x), int(y)


def test_empty_set_is_one_cell():
    assert cell_decomposition([], H, 50).cell_count == 1


def test_single_arc_splits_the_square():
    assert cell_decomposition([(1, 1, 0, 0)], H, 200).cell_count == 2


def test_hurwitz_cell_count(hurwitz_cells, hurwitz_closure):
    assert hurwitz_cells.cell_count == HURWITZ_CELLS
    assert cell_decomposition(hurwitz_closure[0], H, 300).cell_count == HURWITZ_CELLS


def test_hurwitz_cells_have_square_symmetry(hurwitz_cells):
    lg = hurwitz_cells.label_grid()
    # the lattice is symmetric about the centre, so reflections permute labels
    for img in (lg[::-1, :], lg[:, ::-1], lg.T):
        pairs = set(zip(lg.ravel().tolist(), img.ravel().tolist()))
        assert len(pairs) == HURWITZ_CELLS


def test_representatives_lie_in_their_cells(hurwitz_cells):
    reps = np.array(hurwitz_cells.representatives)
    assert reps.size == HURWITZ_CELLS
    assert hurwitz_cells.locate(reps).tolist() == list(range(HURWITZ_CELLS))


def test_locate_agrees_with_lattice_labels(hurwitz_cells):
    rng = np.random.default_rng(0)
    idx = rng.choice(hurwitz_cells.points.size, 2000, replace=False)
    got = hurwitz_cells.locate(hurwitz_cells.points[idx])
    ok = got != UNRESOLVED
    assert ok.mean() > 0.99
    assert (got[ok] == hurwitz_cells.labels[idx][ok]).all()


def test_locate_outside_and_on_circle(hurwitz_cells):
    out = hurwitz_cells.locate(np.array([0.9 + 0j, 0.0 + 0j]))
    assert out[0] == OUTSIDE
    # 0 lies on the four unit circles about +-1, +-i
    assert out[1] == UNRESOLVED


def test_jitter_moves_points_off_circles():
    # lattice points are cell centres (2i - 9)/20 on a 10-grid, so Re z = 1/20 hits a column
    with pytest.warns(RuntimeWarning):
        cd = cell_decomposition([(0, 10, 0, 1)], H, 10)
    assert cd.jittered > 0 and cd.cell_count == 2


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_markov_hurwitz(hurwitz_cells, backend):
    res = verify_markov(hurwitz_cells, H, 300, 1e-9, backend=backend)
    assert res.verdict is Verdict.PASS, res.failures[:2]
    assert res.details["inconclusive_pairs"] == 0


def test_markov_negative_control(hurwitz_cells):
    x, y = _adjacent_pair(hurwitz_cells)
    merged = hurwitz_cells.merged(x, y)
    assert merged.cell_count == HURWITZ_CELLS - 1
    res = verify_markov(merged, H, 300, 1e-9)
    assert res.verdict is Verdict.FAIL
    bad = res.failures[0]
    assert bad["bad"] and "pullback_cells" in bad["bad"][0]


def test_markov_negative_control_off_hurwitz():
    cs, _ = cached_closure(F(2, 3), F(1, 2))
    alpha = Alpha(F(2, 3), F(1, 2))
    cd = cell_decomposition(cs, alpha, 300)
    x, y = _adjacent_pair(cd)
    assert verify_markov(cd.merged(x, y), alpha, 200, 1e-9).verdict is Verdict.FAIL


def test_grid_hash_backends_agree(hurwitz_closure):
    if "cython" not in kernels.available_backends():
        pytest.skip("compiled kernels not built")
    cs, _ = cached_closure(F(1, 5), F(3, 5))
    alpha = Alpha(F(1, 5), F(3, 5))
    with pytest.warns(RuntimeWarning):
        a = cell_decomposition(cs, alpha, 60, backend="python")
    with pytest.warns(RuntimeWarning):
        b = cell_decomposition(cs, alpha, 60, backend="cython")
    assert (a.hashes == b.hashes).all() and (a.labels == b.labels).all()
