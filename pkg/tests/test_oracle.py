import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ift_watershed.engine import MarkerSet, run_ift
from ift_watershed.errors import OracleMismatchError, OracleTooLargeError
from ift_watershed.oracle import TIE, brute_force_costs, check_against_engine
from ift_watershed.volume import Volume

from .conftest import random_case


def test_step_edge():
    vol = Volume((1, 1, 4), [0, 0, 9, 9])
    res = brute_force_costs(vol, MarkerSet([0], [3]))
    assert (res.best_in_cost[1], res.best_out_cost[1], res.decided_label[1]) == (0, 9, "IN")
    assert (res.best_in_cost[2], res.best_out_cost[2], res.decided_label[2]) == (9, 0, "OUT")


def test_plateau_all_ties():
    vol = Volume((1, 1, 5), [5] * 5)
    res = brute_force_costs(vol, MarkerSet([0], [4]))
    assert res.best_in_cost == res.best_out_cost == [0] * 5
    assert res.decided_label == [TIE] * 5


def test_markers_cost_zero_and_missing_class():
    vol, markers = random_case(3, max_side=4)
    res = brute_force_costs(vol, markers)
    for v in markers.in_markers:
        assert res.best_in_cost[v] == 0
    for v in markers.out_markers:
        assert res.best_out_cost[v] == 0
    res = brute_force_costs(vol, MarkerSet([0], []))
    assert all(c == math.inf for c in res.best_out_cost)


def test_cap():
    vol = Volume((5, 5, 3), [0] * 75)
    with pytest.raises(OracleTooLargeError):
        brute_force_costs(vol, MarkerSet([0], [1]))
    with pytest.raises(OracleTooLargeError):
        brute_force_costs(Volume((2, 2, 4), [0] * 16), MarkerSet([0], [1]), method="paths")


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([(2, 2, 2), (3, 2, 2), (1, 3, 4), (2, 5, 1), (1, 1, 9)]),
    st.integers(0, 2**32 - 1),
)
def test_threshold_method_matches_path_enumeration(dims, seed):
    rng = np.random.default_rng(seed)
    n = dims[0] * dims[1] * dims[2]
    vol = Volume(dims, rng.integers(0, 12, n), 8)
    picks = rng.permutation(n)[:3].tolist()
    markers = MarkerSet(picks[:1], picks[1:])
    a = brute_force_costs(vol, markers)
    b = brute_force_costs(vol, markers, method="paths")
    assert a == b


def test_invariant_under_class_swap_and_reindexing():
    vol, markers = random_case(21, max_side=4)
    res = brute_force_costs(vol, markers)
    sw = brute_force_costs(vol, MarkerSet(markers.out_markers, markers.in_markers))
    assert [min(a, b) for a, b in zip(res.best_in_cost, res.best_out_cost)] == [
        min(a, b) for a, b in zip(sw.best_in_cost, sw.best_out_cost)
    ]
    # mirror the volume along x: an isomorphic graph with relabelled voxels
    x, y, z = vol.dims
    mirrored = Volume.from_array(vol.data[:, :, ::-1].copy())
    flip = lambda v: (x - 1 - v % x) + x * (v // x)  # noqa: E731
    mres = brute_force_costs(
        mirrored, MarkerSet(map(flip, markers.in_markers), map(flip, markers.out_markers))
    )
    for v in range(vol.n):
        assert mres.best_in_cost[flip(v)] == res.best_in_cost[v]
        assert mres.best_out_cost[flip(v)] == res.best_out_cost[v]


def test_check_against_engine_reports():
    vol = Volume((1, 1, 4), [0, 0, 9, 9])
    markers = MarkerSet([0], [3])
    r = run_ift(vol, markers, "V")
    rep = check_against_engine(vol, markers, r.labels, r.costs)
    assert rep.ok and rep.ties == []
    vol = Volume((1, 1, 5), [5] * 5)
    r = run_ift(vol, MarkerSet([0], [4]), "V")
    rep = check_against_engine(vol, MarkerSet([0], [4]), r.labels, r.costs)
    assert rep.ok and len(rep.ties) == 5
    bad = check_against_engine(vol, MarkerSet([0], [4]), r.labels, [0, 0, 1, 0, 0])
    assert bad.cost_mismatches == [(2, 1, 0)]
    with pytest.raises(OracleMismatchError, match="voxel 2"):
        bad.raise_for_mismatch()


@pytest.mark.parametrize("seed", range(100))
def test_random_3x3x3(seed, variant):
    rng = np.random.default_rng(seed)
    vol = Volume((3, 3, 3), rng.integers(0, 256, 27), 8)
    picks = rng.permutation(27)[: 2 + seed % 4].tolist()
    markers = MarkerSet(picks[:1], picks[1:])
    r = run_ift(vol, markers, variant)
    check_against_engine(vol, markers, r.labels, r.costs).raise_for_mismatch()
