"""Volumetric dataset as an implicit 6-connected grid graph.

Voxels are addressed linearly with x varying fastest, then y, then z::

    linear = ix + x * (iy + y * iz)

which is the natural slice-by-slice layout of raw volume files. The backing
numpy array therefore has shape ``(z, y, x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateVolumeError, InvalidDimensionsError, ValueRangeError

BIT_DEPTHS = (8, 12, 16)

Dims = tuple[int, int, int]


def _check_dims(x: int, y: int, z: int) -> None:
    for d in (x, y, z):
        if int(d) != d or d < 1:
            raise InvalidDimensionsError(f"dimensions must be positive integers, got {(x, y, z)}")


def dims_to_counts(x: int, y: int, z: int) -> tuple[int, int]:
    """Return ``(n, m)``: the number of voxels and of 6-neighbour arcs."""
    _check_dims(x, y, z)
    n = x * y * z
    m = x * y * (z - 1) + x * (y - 1) * z + (x - 1) * y * z
    return n, m


def coords(v: int, dims: Dims) -> Dims:
    x, y, _ = dims
    ix = v % x
    rest = v // x
    return ix, rest % y, rest // y


def linear_index(ix: int, iy: int, iz: int, dims: Dims) -> int:
    x, y, z = dims
    if not (0 <= ix < x and 0 <= iy < y and 0 <= iz < z):
        raise IndexError(f"voxel {(ix, iy, iz)} outside grid {dims}")
    return ix + x * (iy + y * iz)


def neighbors(v: int, dims: Dims) -> list[int]:
    """Face-adjacent voxels of ``v`` in the fixed order -x, +x, -y, +y, -z, +z.

    The order matters: it decides FIFO tie-breaking on plateaus, and every
    queue backend must see the same interleaving.
    """
    x, y, z = dims
    ix, iy, iz = coords(v, dims)
    xy = x * y
    out = []
    if ix > 0:
        out.append(v - 1)
    if ix < x - 1:
        out.append(v + 1)
    if iy > 0:
        out.append(v - x)
    if iy < y - 1:
        out.append(v + x)
    if iz > 0:
        out.append(v - xy)
    if iz < z - 1:
        out.append(v + xy)
    return out


def arc_weight(fp: int, fq: int) -> int:
    return abs(int(fp) - int(fq))


@dataclass(frozen=True)
class ArcStats:
    max_cost: int
    mean_cost: float
    sdev_cost: float
    arc_node_ratio: float
    n_arcs: int


class Volume:
    """Immutable 3D grid of non-negative integer intensities."""

    def __init__(self, dims: Sequence[int], values, bit_depth: int = 8):
        x, y, z = (int(d) for d in dims)
        _check_dims(x, y, z)
        if bit_depth not in BIT_DEPTHS:
            raise ValueRangeError(f"bit_depth must be one of {BIT_DEPTHS}, got {bit_depth}")
        arr = np.asarray(values)
        if arr.size != x * y * z:
            raise InvalidDimensionsError(
                f"expected {x * y * z} values for dims {(x, y, z)}, got {arr.size}"
            )
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise ValueRangeError("intensities must be integers")
        arr = arr.astype(np.int64).reshape(z, y, x)
        precision = 1 << bit_depth
        if arr.size and (arr.min() < 0 or arr.max() >= precision):
            raise ValueRangeError(
                f"intensities must lie in [0, {precision - 1}] for {bit_depth}-bit data"
            )
        dtype = np.uint8 if bit_depth == 8 else np.uint16
        self._data = np.ascontiguousarray(arr, dtype=dtype)
        self._data.setflags(write=False)
        self.dims: Dims = (x, y, z)
        self.bit_depth = bit_depth

    @classmethod
    def from_array(cls, array: np.ndarray, bit_depth: int = 8) -> "Volume":
        """Build from a ``(z, y, x)`` shaped array."""
        z, y, x = array.shape
        return cls((x, y, z), array.ravel(), bit_depth)

    @property
    def data(self) -> np.ndarray:
        """Read-only ``(z, y, x)`` view of the intensities."""
        return self._data

    @property
    def values(self) -> np.ndarray:
        """Flat read-only view in linear-index order."""
        return self._data.reshape(-1)

    @property
    def n(self) -> int:
        return self._data.size

    @property
    def m(self) -> int:
        return dims_to_counts(*self.dims)[1]

    @property
    def precision(self) -> int:
        return 1 << self.bit_depth

    def index(self, ix: int, iy: int, iz: int) -> int:
        return linear_index(ix, iy, iz, self.dims)

    def coords(self, v: int) -> Dims:
        return coords(v, self.dims)

    def neighbors(self, v: int) -> list[int]:
        return neighbors(v, self.dims)

    def __repr__(self):
        x, y, z = self.dims
        return f"Volume({x}x{y}x{z}, {self.bit_depth}-bit)"

    def __eq__(self, other):
        if not isinstance(other, Volume):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.bit_depth == other.bit_depth
            and np.array_equal(self._data, other._data)
        )

    __hash__ = None


def arc_weights(vol: Volume) -> list[np.ndarray]:
    """Weights of all arcs, grouped by axis (x, y, z); each arc appears once."""
    d = vol.data.astype(np.int64)
    return [
        np.abs(np.diff(d, axis=2)).ravel(),
        np.abs(np.diff(d, axis=1)).ravel(),
        np.abs(np.diff(d, axis=0)).ravel(),
    ]


def max_diff(vol: Volume) -> int:
    """Largest absolute difference between 6-neighbours (0 for a single voxel)."""
    return max((int(w.max()) for w in arc_weights(vol) if w.size), default=0)


def arc_stats(vol: Volume) -> ArcStats:
    groups = arc_weights(vol)
    m = sum(w.size for w in groups)
    if m == 0:
        raise DegenerateVolumeError("volume has no arcs")
    w = np.concatenate(groups)
    return ArcStats(
        max_cost=int(w.max()),
        mean_cost=float(w.mean()),
        sdev_cost=float(w.std()),
        arc_node_ratio=m / vol.n,
        n_arcs=m,
    )
