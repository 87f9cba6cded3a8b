import numpy as np
import pytest

from ift_watershed.errors import InvalidDimensionsError, ValueRangeError
from ift_watershed.synthgen import (
    GenSpec,
    chessboard_markers,
    default_markers,
    generate,
    parse_gen_spec,
    random_markers,
    splitmix64,
)
from ift_watershed.volume import arc_stats, max_diff, neighbors

MASK = (1 << 64) - 1


def splitmix64_reference(seed, count):
    state = seed
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


@pytest.mark.parametrize("seed", [0, 1, 42, 2**64 - 1])
def test_splitmix64_matches_sequential(seed):
    assert splitmix64(seed, 50).tolist() == splitmix64_reference(seed, 50)


def test_splitmix64_published_value():
    assert int(splitmix64(0, 1)[0]) == 0xE220A8397B1DCDAF


def test_uniform_and_step_edge():
    assert max_diff(generate(GenSpec("uniform", (3, 4, 5), value=7))) == 0
    vol = generate(GenSpec("step_edge", (1, 1, 4), low=0, high=9, position=2))
    assert vol.values.tolist() == [0, 0, 9, 9]


def test_noise_golden():
    vol = generate(GenSpec("noise", (8, 8, 8), low=0, high=255, seed=42))
    assert vol.values[:8].tolist() == [149, 3, 82, 148, 242, 6, 93, 164]
    assert int(vol.values.sum()) == 63988
    s = arc_stats(vol)
    assert s.max_cost == 251
    assert round(s.mean_cost * s.n_arcs) == 113891
    assert s.sdev_cost == pytest.approx(58.175358204945965, rel=1e-12)
    assert generate(GenSpec("noise", (8, 8, 8), seed=42)) == vol


def test_blob_and_ramp():
    vol = generate(GenSpec("blob", (9, 9, 9), low=10, high=200, radius=2))
    assert vol.data[4, 4, 4] == 200 and vol.data[0, 0, 0] == 10
    assert set(np.unique(vol.values).tolist()) == {10, 200}
    ramp = generate(GenSpec("gradient_ramp", (2, 2, 5), low=0, high=100, axis="z"))
    assert ramp.data[:, 0, 0].tolist() == [0, 25, 50, 75, 100]


def test_generate_errors():
    with pytest.raises(ValueRangeError):
        generate(GenSpec("uniform", (2, 2, 2), value=256))
    with pytest.raises(ValueError):
        generate(GenSpec("plasma", (2, 2, 2)))
    with pytest.raises(InvalidDimensionsError):
        generate(GenSpec("noise", (0, 2, 2)))


def test_parse_gen_spec():
    spec = parse_gen_spec("noise:seed=42,low=1,high=0x20", (4, 4, 4), 12)
    assert (spec.kind, spec.seed, spec.low, spec.high, spec.bit_depth) == ("noise", 42, 1, 32, 12)
    assert parse_gen_spec("uniform", (1, 1, 1)).kind == "uniform"
    with pytest.raises(ValueError):
        parse_gen_spec("noise:sed=1", (1, 1, 1))


def test_chessboard():
    assert chessboard_markers((1, 1, 2)).in_markers == (0,)
    m = chessboard_markers((2, 2, 1))
    assert (m.in_markers, m.out_markers) == ((0, 3), (1, 2))
    dims = (3, 4, 5)
    m = chessboard_markers(dims)
    assert sorted(m.in_markers + m.out_markers) == list(range(60))
    ins = set(m.in_markers)
    for p in range(60):
        for q in neighbors(p, dims):
            assert (p in ins) != (q in ins)
    with pytest.raises(InvalidDimensionsError):
        chessboard_markers((1, 1, 1))


def test_marker_helpers():
    m = default_markers((5, 5, 5))
    assert m.in_markers == (62,) and m.out_markers == (0,)
    r = random_markers((4, 4, 4), 3, 2, seed=7)
    assert r == random_markers((4, 4, 4), 3, 2, seed=7)
    assert len(set(r.in_markers + r.out_markers)) == 5
