"""Deterministic synthetic volumes and marker patterns.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014) evaluated in
counter mode: output ``i`` (1-based) is ``mix(seed + i * 0x9E3779B97F4A7C15)``
with 64-bit wraparound. This matches the usual sequential SplitMix64 stream,
is trivially portable, and vectorises with numpy ``uint64`` arithmetic, so
golden values do not depend on platform or numpy version.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .engine import MarkerSet
from .errors import InvalidDimensionsError, ValueRangeError
from .volume import Volume

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

KINDS = ("uniform", "step_edge", "blob", "noise", "gradient_ramp")
AXES = {"x": 2, "y": 1, "z": 0}


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` SplitMix64 outputs for ``seed`` as a uint64 array."""
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + i * GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniform_ints(seed: int, count: int, low: int, high: int) -> np.ndarray:
    """Integers in ``[low, high]`` (modulo reduction; bias is below 2**-40 here)."""
    span = np.uint64(high - low + 1)
    return (splitmix64(seed, count) % span).astype(np.int64) + low


@dataclass(frozen=True)
class GenSpec:
    kind: str
    dims: tuple[int, int, int]
    low: int = 0
    high: int = 255
    value: int = 0
    position: int | None = None
    axis: str = "z"
    radius: float | None = None
    seed: int = 0
    bit_depth: int = 8


def generate(spec: GenSpec) -> Volume:
    x, y, z = spec.dims
    if min(x, y, z) < 1:
        raise InvalidDimensionsError(f"dimensions must be positive, got {spec.dims}")
    cp = 1 << spec.bit_depth
    for name in ("low", "high", "value"):
        v = getattr(spec, name)
        if not 0 <= v < cp:
            raise ValueRangeError(f"{name}={v} outside [0, {cp - 1}]")
    if spec.low > spec.high:
        raise ValueRangeError("low must not exceed high")
    if spec.axis not in AXES:
        raise ValueError(f"axis must be one of x, y, z, got {spec.axis!r}")
    shape = (z, y, x)
    ax = AXES[spec.axis]

    if spec.kind == "uniform":
        data = np.full(shape, spec.value, dtype=np.int64)
    elif spec.kind == "step_edge":
        length = shape[ax]
        pos = length // 2 if spec.position is None else spec.position
        if not 0 <= pos <= length:
            raise ValueRangeError(f"step position {pos} outside [0, {length}]")
        coord = np.indices(shape)[ax]
        data = np.where(coord < pos, spec.low, spec.high)
    elif spec.kind == "blob":
        zz, yy, xx = np.indices(shape)
        r = spec.radius if spec.radius is not None else max(min(x, y, z) / 4.0, 0.5)
        d2 = (xx - (x - 1) / 2) ** 2 + (yy - (y - 1) / 2) ** 2 + (zz - (z - 1) / 2) ** 2
        data = np.where(d2 <= r * r, spec.high, spec.low)
    elif spec.kind == "noise":
        data = uniform_ints(spec.seed, x * y * z, spec.low, spec.high).reshape(shape)
    elif spec.kind == "gradient_ramp":
        length = shape[ax]
        coord = np.indices(shape)[ax]
        frac = coord / (length - 1) if length > 1 else np.zeros(shape)
        data = spec.low + np.rint(frac * (spec.high - spec.low)).astype(np.int64)
    else:
        raise ValueError(f"unknown generator kind {spec.kind!r}; expected one of {KINDS}")
    return Volume.from_array(np.asarray(data, dtype=np.int64), spec.bit_depth)


def parse_gen_spec(text: str, dims, bit_depth: int = 8) -> GenSpec:
    """Parse ``kind[:key=value,...]``, e.g. ``noise:seed=42,low=0,high=255``."""
    kind, _, rest = text.partition(":")
    spec = GenSpec(kind=kind.strip(), dims=tuple(dims), bit_depth=bit_depth)
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {KINDS}")
    updates = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq:
            raise ValueError(f"malformed generator option {item!r}")
        if key == "axis":
            updates[key] = val.strip()
        elif key == "radius":
            updates[key] = float(val)
        elif key in ("low", "high", "value", "position", "seed"):
            updates[key] = int(val, 0)
        else:
            raise ValueError(f"unknown generator option {key!r}")
    return replace(spec, **updates)


def chessboard_markers(dims) -> MarkerSet:
    """Every voxel is a marker: even coordinate parity IN, odd OUT.

    Every arc then joins an IN and an OUT marker, which is the pattern that
    fills the no-removal queues to their worst case.
    """
    x, y, z = dims
    if x * y * z < 2:
        raise InvalidDimensionsError("chessboard markers need at least two voxels")
    zz, yy, xx = np.indices((z, y, x))
    parity = ((xx + yy + zz) % 2).ravel()
    idx = np.arange(x * y * z)
    return MarkerSet(idx[parity == 0].tolist(), idx[parity == 1].tolist())


def default_markers(dims) -> MarkerSet:
    """One IN marker at the centre voxel and one OUT marker at the origin."""
    x, y, z = dims
    if x * y * z < 2:
        raise InvalidDimensionsError("need at least two voxels for IN and OUT markers")
    centre = x // 2 + x * (y // 2 + y * (z // 2))
    return MarkerSet([centre], [0])


def random_markers(dims, n_in: int, n_out: int, seed: int) -> MarkerSet:
    """Disjoint random IN/OUT marker lists in a seed-determined order."""
    x, y, z = dims
    n = x * y * z
    if n_in + n_out > n:
        raise ValueRangeError(f"{n_in + n_out} markers requested for {n} voxels")
    order = np.argsort(splitmix64(seed, n), kind="stable")
    picks = order[: n_in + n_out].tolist()
    return MarkerSet(picks[:n_in], picks[n_in:])
