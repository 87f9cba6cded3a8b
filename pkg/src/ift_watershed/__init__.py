"""Watershed-from-markers segmentation of 3D volumes via the image foresting
transform, with five bucket-queue memory layouts and a memory model."""

__version__ = "0.1.0"

from .buckets import BRICK_CAPACITY, Variant, make_queue
from .engine import IFTResult, Label, MarkerSet, run_ift, validate_markers
from .memmodel import MemModel, RunStats, report, used_bytes, worst_case_bytes
from .volume import ArcStats, Volume, arc_stats, arc_weight, dims_to_counts, max_diff, neighbors

__all__ = [
    "ArcStats",
    "BRICK_CAPACITY",
    "IFTResult",
    "Label",
    "MarkerSet",
    "MemModel",
    "RunStats",
    "Variant",
    "Volume",
    "arc_stats",
    "arc_weight",
    "dims_to_counts",
    "make_queue",
    "max_diff",
    "neighbors",
    "report",
    "run_ift",
    "used_bytes",
    "validate_markers",
    "worst_case_bytes",
]
