"""Watershed from markers computed as an image foresting transform.

Voxels are flooded in order of their bottleneck path cost (the largest arc
weight on the cheapest path to a marker). Ties on plateaus are broken by the
FIFO order of the buckets alone, so the flood distance across a plateau is
never stored. Object markers are queued before background markers and thus
win plateau ties.

Three propagation loops share the same result:

* variants I and II keep one entry per voxel and move improved voxels
  (strict max test, remove, re-enqueue);
* variant III keeps the strict max test but leaves superseded entries behind;
* variants IV and V drop the max test entirely and enqueue every TEMP
  neighbour; entries for voxels that are already DONE are skipped on pop.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .buckets import BRICK_CAPACITY, BrickQueue, BucketQueue, Variant, make_queue
from .errors import ConflictingMarkerError, MarkerOutOfRangeError, NoMarkersError
from .memmodel import MemModel, RunStats, queue_capacity
from .volume import Volume, max_diff


class Label(enum.IntEnum):
    OUT = 0
    IN = 1


TEMP, DONE = 0, 1


@dataclass(frozen=True)
class MarkerSet:
    """Ordered object (IN) and background (OUT) seed lists of linear indices."""

    in_markers: tuple[int, ...]
    out_markers: tuple[int, ...]

    def __init__(self, in_markers: Iterable[int] = (), out_markers: Iterable[int] = ()):
        object.__setattr__(self, "in_markers", tuple(int(v) for v in in_markers))
        object.__setattr__(self, "out_markers", tuple(int(v) for v in out_markers))

    def __len__(self):
        return len(self.in_markers) + len(self.out_markers)

    @classmethod
    def from_coords(cls, vol_or_dims, in_coords=(), out_coords=()) -> "MarkerSet":
        dims = getattr(vol_or_dims, "dims", vol_or_dims)
        x, y, _ = dims
        idx = lambda c: c[0] + x * (c[1] + y * c[2])  # noqa: E731
        return cls([idx(c) for c in in_coords], [idx(c) for c in out_coords])

    def deduplicated(self) -> tuple["MarkerSet", int]:
        """Drop repeated entries inside each list (first occurrence wins)."""
        dropped = 0
        lists = []
        for seq in (self.in_markers, self.out_markers):
            seen = set()
            kept = []
            for v in seq:
                if v in seen:
                    dropped += 1
                    continue
                seen.add(v)
                kept.append(v)
            lists.append(kept)
        return MarkerSet(*lists), dropped


def validate_markers(vol: Volume, markers: MarkerSet) -> None:
    if not len(markers):
        raise NoMarkersError("at least one marker is required")
    n = vol.n
    for v in markers.in_markers + markers.out_markers:
        if not 0 <= v < n:
            raise MarkerOutOfRangeError(f"marker index {v} outside [0, {n})")
    overlap = set(markers.in_markers) & set(markers.out_markers)
    if overlap:
        raise ConflictingMarkerError(
            f"voxels marked both IN and OUT: {sorted(overlap)[:10]}"
        )


@dataclass
class IFTResult:
    labels: np.ndarray
    costs: np.ndarray
    stats: RunStats
    pop_costs: list[int] | None = field(default=None, repr=False)

    def label_bytes(self) -> bytes:
        return self.labels.astype(np.uint8).tobytes()


def bucket_count(vol: Volume, mode: str = "precision", c: int | None = None) -> int:
    """Number of buckets: the dataset precision, or exact MaxDiff + 1."""
    if mode == "precision":
        return vol.precision
    if mode == "maxdiff":
        return (max_diff(vol) if c is None else c) + 1
    raise ValueError(f"unknown bucket sizing {mode!r}; expected 'precision' or 'maxdiff'")


def run_ift(
    vol: Volume,
    markers: MarkerSet,
    backend="V",
    *,
    buckets: str = "precision",
    in_first: bool = True,
    queue: BucketQueue | None = None,
    record_pops: bool = False,
) -> IFTResult:
    """Segment ``vol`` from ``markers`` using the given queue variant.

    ``in_first=False`` queues background markers first (used to study marker
    precedence). A prebuilt ``queue`` may be supplied for instrumentation; it
    must match ``backend`` and have at least ``bucket_count`` buckets.
    """
    variant = Variant.parse(backend)
    validate_markers(vol, markers)
    markers, dropped = markers.deduplicated()

    c = max_diff(vol)
    c_buckets = bucket_count(vol, buckets, c)
    n = vol.n
    inf = c + 1

    t0 = time.perf_counter()
    labels = bytearray(n)
    done = bytearray(n)
    cost = [inf] * n
    if queue is None:
        queue = make_queue(variant, c_buckets - 1, n, labels)
    elif queue.variant is not variant:
        raise ValueError(f"queue is variant {queue.variant.value}, backend is {variant.value}")
    elif getattr(queue, "labels", labels) is not labels:
        queue.labels = labels

    seeds = [(markers.in_markers, Label.IN), (markers.out_markers, Label.OUT)]
    if not in_first:
        seeds.reverse()
    for seq, label in seeds:
        for v in seq:
            cost[v] = 0
            labels[v] = label
            queue.enqueue(v, 0, int(label))

    values = vol.values.tolist()
    pops: list[int] | None = [] if record_pops else None
    if variant in (Variant.I, Variant.II):
        skipped = _propagate_with_removal(queue, values, vol.dims, cost, labels, done, pops)
    elif variant is Variant.III:
        skipped = _propagate_lazy(queue, values, vol.dims, cost, labels, done, pops)
    else:
        skipped = _propagate_no_max_test(queue, values, vol.dims, cost, labels, done, pops)
    elapsed = time.perf_counter() - t0

    stats = _collect_stats(vol, variant, markers, dropped, queue, c, c_buckets, skipped, elapsed)
    return IFTResult(
        labels=np.frombuffer(bytes(labels), dtype=np.uint8).copy(),
        costs=np.array(cost, dtype=np.int64),
        stats=stats,
        pop_costs=pops,
    )


# The three loops below inline the neighbour scan in the fixed order
# -x, +x, -y, +y, -z, +z (same order as volume.neighbors).


def _propagate_with_removal(q, values, dims, cost, labels, done, pops):
    x, y, z = dims
    xy = x * y
    xm, ym, zm = x - 1, y - 1, z - 1
    pop = q.dequeue_min
    enqueue = q.enqueue
    contains = q.contains
    remove = q.remove
    skipped = 0
    while q.not_empty():
        v, cv, lv = pop()
        if done[v]:
            skipped += 1
            continue
        done[v] = DONE
        if pops is not None:
            pops.append(cv)
        fv = values[v]
        ix = v % x
        r = v // x
        iy = r % y
        iz = r // y
        nb = []
        if ix:
            nb.append(v - 1)
        if ix < xm:
            nb.append(v + 1)
        if iy:
            nb.append(v - x)
        if iy < ym:
            nb.append(v + x)
        if iz:
            nb.append(v - xy)
        if iz < zm:
            nb.append(v + xy)
        for p in nb:
            if done[p]:
                continue
            w = fv - values[p]
            if w < 0:
                w = -w
            cp = cv if cv > w else w
            if cp < cost[p]:
                cost[p] = cp
                labels[p] = lv
                if contains(p):
                    remove(p)
                enqueue(p, cp, lv)
    return skipped


def _propagate_lazy(q, values, dims, cost, labels, done, pops):
    x, y, z = dims
    xy = x * y
    xm, ym, zm = x - 1, y - 1, z - 1
    pop = q.dequeue_min
    enqueue = q.enqueue
    supersede = q.supersede
    best_cost = q.best_cost
    skipped = 0
    while q.not_empty():
        v, cv, lv = pop()
        if done[v] or q.last_pop_stale:
            skipped += 1
            continue
        done[v] = DONE
        cost[v] = cv
        labels[v] = lv
        if pops is not None:
            pops.append(cv)
        fv = values[v]
        ix = v % x
        r = v // x
        iy = r % y
        iz = r // y
        nb = []
        if ix:
            nb.append(v - 1)
        if ix < xm:
            nb.append(v + 1)
        if iy:
            nb.append(v - x)
        if iy < ym:
            nb.append(v + x)
        if iz:
            nb.append(v - xy)
        if iz < zm:
            nb.append(v + xy)
        for p in nb:
            if done[p]:
                continue
            w = fv - values[p]
            if w < 0:
                w = -w
            cp = cv if cv > w else w
            best = best_cost(p)
            if best is None:
                enqueue(p, cp, lv)
            elif cp < best:
                supersede(p, cp, lv)
    return skipped


def _propagate_no_max_test(q, values, dims, cost, labels, done, pops):
    x, y, z = dims
    xy = x * y
    xm, ym, zm = x - 1, y - 1, z - 1
    pop = q.dequeue_min
    enqueue = q.enqueue
    skipped = 0
    while q.not_empty():
        v, cv, lv = pop()
        if done[v]:
            skipped += 1
            continue
        done[v] = DONE
        cost[v] = cv
        labels[v] = lv
        if pops is not None:
            pops.append(cv)
        fv = values[v]
        ix = v % x
        r = v // x
        iy = r % y
        iz = r // y
        if ix and not done[v - 1]:
            w = fv - values[v - 1]
            if w < 0:
                w = -w
            enqueue(v - 1, cv if cv > w else w, lv)
        if ix < xm and not done[v + 1]:
            w = fv - values[v + 1]
            if w < 0:
                w = -w
            enqueue(v + 1, cv if cv > w else w, lv)
        if iy and not done[v - x]:
            w = fv - values[v - x]
            if w < 0:
                w = -w
            enqueue(v - x, cv if cv > w else w, lv)
        if iy < ym and not done[v + x]:
            w = fv - values[v + x]
            if w < 0:
                w = -w
            enqueue(v + x, cv if cv > w else w, lv)
        if iz and not done[v - xy]:
            w = fv - values[v - xy]
            if w < 0:
                w = -w
            enqueue(v - xy, cv if cv > w else w, lv)
        if iz < zm and not done[v + xy]:
            w = fv - values[v + xy]
            if w < 0:
                w = -w
            enqueue(v + xy, cv if cv > w else w, lv)
    return skipped


def _collect_stats(vol, variant, markers, dropped, q, c, c_buckets, skipped, elapsed) -> RunStats:
    n, m = vol.n, vol.m
    model = MemModel.build(variant, c_buckets, n, m)
    capacity = queue_capacity(variant, n, m)
    peak = q.peak_length()
    bricks_peak = bricks_allocated = bricks_reused = None
    avg_fill = avg_fill_cum = None
    if isinstance(q, BrickQueue):
        bricks_peak = q.bricks_peak
        bricks_allocated = q.bricks_allocated
        bricks_reused = q.bricks_reused
        avg_fill = peak / bricks_peak if bricks_peak else 0.0
        acq = q.brick_acquisitions
        avg_fill_cum = q.total_enqueues / acq if acq else 0.0
        assert avg_fill <= BRICK_CAPACITY and avg_fill_cum <= BRICK_CAPACITY
    return RunStats(
        variant=variant.value,
        dims=tuple(vol.dims),
        n=n,
        m=m,
        max_diff=c,
        c_buckets=c_buckets,
        in_markers=len(markers.in_markers),
        out_markers=len(markers.out_markers),
        duplicate_markers=dropped,
        peak_queue_entries=peak,
        total_enqueues=q.total_enqueues,
        total_pops=q.total_pops,
        skipped_pops=skipped,
        cursor_advances=q.cursor_advances,
        queue_capacity=capacity,
        queue_fill_percent=100.0 * peak / capacity if capacity else 0.0,
        bricks_peak=bricks_peak,
        bricks_allocated=bricks_allocated,
        bricks_reused=bricks_reused,
        avg_brick_fill=avg_fill,
        avg_brick_fill_cumulative=avg_fill_cum,
        wall_time_seconds=elapsed,
        modeled_worst_bytes=model.worst_case_bytes,
        modeled_used_bytes=model.used_bytes(peak, bricks_peak or 0),
    )


def label_names(labels: Sequence[int]) -> list[str]:
    return [Label(int(v)).name for v in labels]
