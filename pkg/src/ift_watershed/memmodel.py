"""Worst-case memory formulas per variant and the per-run statistics record.

The model describes the packed layout (4-byte links, 2-byte costs, 1-bit
flags and labels, 1024-byte bricks holding 254 words), not the memory the
Python objects happen to occupy. Allocator overhead is not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .buckets import BRICK_CAPACITY, Variant

MB = 1 << 20
BRICK_BYTES = 256 * 4

# variant -> (fixed bytes per voxel, dynamic bytes per entry, capacity basis)
COEFFICIENTS = {
    Variant.I: (10.0, 0.0, "n"),
    Variant.II: (4.0, 10.0, "n"),
    Variant.III: (4.0, 7.0, "m"),
    Variant.IV: (0.0, 8.0, "m"),
    Variant.V: (0.0, 4.0 + 8.0 / BRICK_CAPACITY, "m"),
}


def common_fixed_bytes(c_buckets: int, n: int) -> float:
    """Two bucket pointer arrays (8 B per bucket) plus 1-bit flag and label volumes."""
    return 8.0 * c_buckets + n / 4.0


def approximate_arcs(n: int) -> int:
    """The ``m ~ 3n`` shortcut for 6-connected volumes."""
    return 3 * n


@dataclass(frozen=True)
class MemModel:
    variant: Variant
    fixed_common_bytes: float
    variant_fixed_bytes: float
    dynamic_per_entry_bytes: float
    dynamic_capacity: int

    @classmethod
    def build(cls, variant, c_buckets: int, n: int, m: int) -> "MemModel":
        variant = Variant.parse(variant)
        fixed, per_entry, basis = COEFFICIENTS[variant]
        return cls(
            variant=variant,
            fixed_common_bytes=common_fixed_bytes(c_buckets, n),
            variant_fixed_bytes=fixed * n,
            dynamic_per_entry_bytes=per_entry,
            dynamic_capacity=n if basis == "n" else m,
        )

    @property
    def fixed_bytes(self) -> float:
        return self.fixed_common_bytes + self.variant_fixed_bytes

    @property
    def dynamic_max_bytes(self) -> float:
        return self.dynamic_per_entry_bytes * self.dynamic_capacity

    @property
    def worst_case_bytes(self) -> float:
        return self.fixed_bytes + self.dynamic_max_bytes

    def used_bytes(self, peak_entries: int, bricks_peak: int = 0) -> float:
        if self.variant is Variant.I:
            return self.fixed_bytes
        if self.variant is Variant.V:
            return self.fixed_bytes + BRICK_BYTES * bricks_peak
        return self.fixed_bytes + self.dynamic_per_entry_bytes * peak_entries


def worst_case_bytes(variant, c_buckets: int, n: int, m: int) -> float:
    return MemModel.build(variant, c_buckets, n, m).worst_case_bytes


def used_bytes(variant, c_buckets: int, n: int, peak_entries: int, bricks_peak: int = 0) -> float:
    # capacity does not enter the used figure, so m is irrelevant here
    return MemModel.build(variant, c_buckets, n, 0).used_bytes(peak_entries, bricks_peak)


def queue_capacity(variant, n: int, m: int) -> int:
    return n if COEFFICIENTS[Variant.parse(variant)][2] == "n" else m


@dataclass
class RunStats:
    variant: str
    dims: tuple
    n: int
    m: int
    max_diff: int
    c_buckets: int
    in_markers: int
    out_markers: int
    duplicate_markers: int
    peak_queue_entries: int
    total_enqueues: int
    total_pops: int
    skipped_pops: int
    cursor_advances: int
    queue_capacity: int
    queue_fill_percent: float
    bricks_peak: int | None
    bricks_allocated: int | None
    bricks_reused: int | None
    avg_brick_fill: float | None
    avg_brick_fill_cumulative: float | None
    wall_time_seconds: float
    modeled_worst_bytes: float
    modeled_used_bytes: float

    @property
    def propagation_enqueues(self) -> int:
        return self.total_enqueues - self.in_markers - self.out_markers


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, tuple):
        return "x".join(str(v) for v in value)
    return str(value)


def report(stats: RunStats, model: MemModel | None = None, *, include_time: bool = True) -> str:
    """Render ``key=value`` lines in a fixed order.

    Brick fields appear only for variant V. ``wall_time_seconds`` is the only
    field that differs between identical runs; drop it with
    ``include_time=False`` for golden comparisons.
    """
    lines = []
    for f in fields(stats):
        value = getattr(stats, f.name)
        if f.name.startswith(("bricks_", "avg_brick")) and stats.variant != Variant.V.value:
            continue
        if f.name == "wall_time_seconds" and not include_time:
            continue
        lines.append(f"{f.name}={_fmt(value)}")
    if model is not None:
        lines.append(f"model_fixed_bytes={_fmt(float(model.fixed_bytes))}")
        lines.append(f"model_dynamic_max_bytes={_fmt(float(model.dynamic_max_bytes))}")
    lines.append(f"modeled_worst_mb={stats.modeled_worst_bytes / MB:.1f}")
    lines.append(f"modeled_used_mb={stats.modeled_used_bytes / MB:.1f}")
    return "\n".join(lines) + "\n"
