"""On-disk formats: raw volumes, marker lists, label bytes, PGM slices.

Raw volumes are headerless, x-fastest, one byte per voxel for 8-bit data and
two little-endian bytes otherwise. Label files hold one byte per voxel
(1 = IN, 0 = OUT) in the same order.

Marker files are text, one marker per line, 0-based coordinates::

    # object first, then background
    in  12 40 7
    out 0 0 0

Line order is kept within each class and becomes the enqueue order.
"""

from __future__ import annotations

import os

import numpy as np

from .engine import MarkerSet
from .errors import FormatError, MarkerOutOfRangeError, ValueRangeError
from .volume import BIT_DEPTHS, Volume, dims_to_counts


def bytes_per_voxel(bits: int) -> int:
    if bits not in BIT_DEPTHS:
        raise ValueRangeError(f"bit depth must be one of {BIT_DEPTHS}, got {bits}")
    return 1 if bits == 8 else 2


def parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.lower().replace("×", "x").split("x")
    if len(parts) != 3:
        raise FormatError(f"dims must look like XxYxZ, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise FormatError(f"dims must be integers, got {text!r}") from None
    dims_to_counts(*dims)
    return dims


def load_raw_volume(path, dims, bits: int) -> Volume:
    n = dims_to_counts(*dims)[0]
    bpv = bytes_per_voxel(bits)
    payload = open(path, "rb").read()
    if len(payload) != n * bpv:
        raise FormatError(
            f"{path}: expected {n * bpv} bytes for {n} voxels at {bits} bits, got {len(payload)}"
        )
    values = np.frombuffer(payload, dtype=np.uint8 if bpv == 1 else "<u2")
    if values.size and int(values.max()) >= 1 << bits:
        bad = int(np.argmax(values >= 1 << bits))
        raise ValueRangeError(f"{path}: voxel {bad} has value {int(values[bad])} >= 2**{bits}")
    return Volume(dims, values, bits)


def save_raw_volume(vol: Volume, path) -> None:
    dtype = np.uint8 if vol.bit_depth == 8 else "<u2"
    with open(path, "wb") as fh:
        fh.write(vol.values.astype(dtype).tobytes())


def parse_markers(text: str, dims, source: str = "<markers>") -> MarkerSet:
    x, y, z = dims
    ins, outs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0].lower() not in ("in", "out"):
            raise FormatError(f"{source}:{lineno}: expected 'in|out X Y Z', got {raw.strip()!r}")
        try:
            ix, iy, iz = (int(p) for p in parts[1:])
        except ValueError:
            raise FormatError(f"{source}:{lineno}: coordinates must be integers") from None
        if not (0 <= ix < x and 0 <= iy < y and 0 <= iz < z):
            raise MarkerOutOfRangeError(
                f"{source}:{lineno}: marker {(ix, iy, iz)} outside grid {tuple(dims)}"
            )
        (ins if parts[0].lower() == "in" else outs).append(ix + x * (iy + y * iz))
    return MarkerSet(ins, outs)


def load_markers(path, dims) -> MarkerSet:
    with open(path, encoding="utf-8") as fh:
        return parse_markers(fh.read(), dims, str(path))


def format_markers(markers: MarkerSet, dims) -> str:
    x, y, _ = dims
    lines = []
    for tag, seq in (("in", markers.in_markers), ("out", markers.out_markers)):
        for v in seq:
            lines.append(f"{tag} {v % x} {(v // x) % y} {v // (x * y)}")
    return "\n".join(lines) + "\n"


def write_labels(labels, path) -> None:
    data = np.asarray(labels, dtype=np.uint8)
    if data.size and data.max() > 1:
        raise ValueRangeError("labels must be 0 (OUT) or 1 (IN)")
    with open(path, "wb") as fh:
        fh.write(data.tobytes())


def read_labels(path, n: int | None = None) -> np.ndarray:
    data = np.fromfile(path, dtype=np.uint8)
    if n is not None and data.size != n:
        raise FormatError(f"{path}: expected {n} label bytes, got {data.size}")
    return data


def _take_slice(data: np.ndarray, axis: str, index: int) -> np.ndarray:
    axis = axis.lower()
    pos = {"z": 0, "y": 1, "x": 2}.get(axis)
    if pos is None:
        raise FormatError(f"slice axis must be x, y or z, got {axis!r}")
    if not 0 <= index < data.shape[pos]:
        raise IndexError(f"slice index {index} outside [0, {data.shape[pos]}) on axis {axis}")
    return np.take(data, index, axis=pos)


def window_to_8bit(img: np.ndarray) -> np.ndarray:
    lo, hi = int(img.min()), int(img.max())
    if hi == lo:
        return np.zeros(img.shape, dtype=np.uint8)
    scaled = (img.astype(np.int64) - lo) * 255 // (hi - lo)
    return scaled.astype(np.uint8)


def export_slice(source, axis: str, index: int, path, dims=None) -> tuple[int, int]:
    """Write one slice as binary PGM (P5) and return ``(width, height)``.

    ``source`` is either a :class:`Volume` (intensities linearly windowed to
    the slice's own min/max) or a flat label array with ``dims`` (0/255).
    """
    if isinstance(source, Volume):
        img = window_to_8bit(_take_slice(source.data, axis, index))
    else:
        if dims is None:
            raise ValueError("dims are required for a label array")
        x, y, z = dims
        labels = np.asarray(source, dtype=np.uint8).reshape(z, y, x)
        img = np.where(_take_slice(labels, axis, index) > 0, 255, 0).astype(np.uint8)
    height, width = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())
    return width, height


def read_pgm(path) -> np.ndarray:
    raw = open(path, "rb").read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while raw[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    width, height, maxval = (int(t) for t in tokens[1:])
    body = raw[pos + 1 :]
    if maxval != 255 or len(body) != width * height:
        raise FormatError(f"{path}: unexpected PGM payload")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width)


def ensure_parent(path) -> None:
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
