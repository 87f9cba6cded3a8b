"""Exception hierarchy shared by every module of the package."""


class WatershedError(ValueError):
    """Base class for all errors raised by ift_watershed."""


class InvalidDimensionsError(WatershedError):
    pass


class ValueRangeError(WatershedError):
    pass


class DegenerateVolumeError(WatershedError):
    pass


class QueueError(WatershedError):
    pass


class CostOutOfRangeError(QueueError):
    pass


class MonotonicityError(QueueError):
    """Enqueue below the current scan cursor (bucket already passed)."""


class EmptyQueueError(QueueError):
    pass


class NotInQueueError(QueueError):
    pass


class DuplicateEntryError(QueueError):
    pass


class MarkerError(WatershedError):
    pass


class ConflictingMarkerError(MarkerError):
    pass


class NoMarkersError(MarkerError):
    pass


class MarkerOutOfRangeError(MarkerError):
    pass


class OracleTooLargeError(WatershedError):
    pass


class OracleMismatchError(WatershedError):
    pass


class FormatError(WatershedError):
    """Malformed or inconsistent input file."""
