import numpy as np
import pytest

from hetnetsim.geometry import Area, build_macro_grid, pairwise_distances
from hetnetsim.spectrum import (Fragment, PrbPool, build_femto_plan,
                                build_macro_reuse, choose_femto_fragment,
                                choose_femto_fragment_indices, prb_overlap)

POOL = PrbPool(75, 180e3)
GRID = build_macro_grid(Area(25_000, 25_000), 5_000)


def test_standard_macro_split():
    plan = build_macro_reuse(POOL, GRID, 3)
    assert [(f.start, f.stop) for f in plan.fragments] == \
        [(0, 25), (25, 50), (50, 75)]


def test_reuse_one_is_whole_pool_single_color():
    plan = build_macro_reuse(POOL, GRID, 1)
    assert len(plan.fragments) == 1
    assert (plan.fragments[0].start, plan.fragments[0].stop) == (0, 75)
    assert (plan.site_fragment == 0).all()


def test_three_coloring_proper_on_grid():
    plan = build_macro_reuse(POOL, GRID, 3)
    d = GRID.inter_site_distance
    dm = pairwise_distances(GRID.xy, GRID.xy)
    for i in range(len(GRID)):
        for j in range(i + 1, len(GRID)):
            if dm[i, j] < 1.001 * d:  # hex neighbors
                assert plan.site_fragment[i] != plan.site_fragment[j]


def test_indivisible_reuse_factor_rejected():
    with pytest.raises(ValueError, match="K must divide total_prbs"):
        build_macro_reuse(POOL, GRID, 4)


@pytest.mark.parametrize("n_f,size", [(1, 75), (3, 25), (5, 15), (15, 5),
                                      (25, 3)])
def test_femto_plan_sizes(n_f, size):
    plan = build_femto_plan(POOL, n_f)
    assert len(plan.fragments) == n_f
    assert all(len(f) == size for f in plan.fragments)


def test_femto_plan_tiles_pool():
    plan = build_femto_plan(POOL, 25)
    seen = set()
    for f in plan.fragments:
        idx = set(f.indices().tolist())
        assert not (seen & idx)
        seen |= idx
    assert seen == set(range(75))


def test_indivisible_femto_count_rejected():
    with pytest.raises(ValueError, match="n_f must divide total_prbs"):
        build_femto_plan(POOL, 2)


def test_fragment_choice_full_band_when_single():
    plan = build_femto_plan(POOL, 1)
    frag = choose_femto_fragment(plan, np.random.default_rng(0))
    assert (frag.start, frag.stop) == (0, 75)


def test_fragment_choice_uniform():
    plan = build_femto_plan(POOL, 3)
    rng = np.random.default_rng(21)
    n = 30_000
    idx = choose_femto_fragment_indices(plan, n, rng)
    sigma = np.sqrt((1 / 3) * (2 / 3) / n)
    for k in range(3):
        assert abs(np.mean(idx == k) - 1 / 3) < 3 * sigma


def test_fragment_choice_smallest_fragments():
    plan = build_femto_plan(POOL, 25)
    rng = np.random.default_rng(3)
    for _ in range(20):
        assert len(choose_femto_fragment(plan, rng)) == 3


def test_overlap_examples():
    plan = build_macro_reuse(POOL, GRID, 3)
    a, b = plan.fragments[0], plan.fragments[1]
    assert prb_overlap(a, b) == 0
    assert prb_overlap({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}) == 5
    assert prb_overlap({10, 11, 12}, Fragment(0, 15)) == 3


def test_overlap_properties():
    rng = np.random.default_rng(17)
    for _ in range(100):
        a = set(rng.integers(0, 75, rng.integers(0, 20)).tolist())
        b = set(rng.integers(0, 75, rng.integers(0, 20)).tolist())
        if not a or not b:
            continue
        assert prb_overlap(a, b) == prb_overlap(b, a)
        assert prb_overlap(a, a) == len(a)
        assert prb_overlap(a, b) <= min(len(a), len(b))


def test_distinct_colors_never_overlap():
    plan = build_macro_reuse(POOL, GRID, 3)
    for i in range(3):
        for j in range(3):
            if i != j:
                assert prb_overlap(plan.fragments[i], plan.fragments[j]) == 0
