"""FIFO bucket priority queues, one per memory-layout variant.

All five backends keep ``max_cost + 1`` buckets indexed by integer cost and a
scan cursor that only moves forward; every operation is O(1) except the
first-non-empty-bucket search in :meth:`BucketQueue.not_empty`, whose total
work over a run is bounded by the number of buckets.

=======  ==============================================================
Variant  Layout
=======  ==============================================================
I        doubly linked list inside a preallocated n-slot arena
II       dynamically allocated doubly linked elements + voxel table
III      singly linked elements with cost and label, superseded lazily
IV       singly linked packed (label, position) words, cost implicit
V        packed words stored in 254-entry bricks with an empty-brick stack
=======  ==============================================================

Variants I and II do not store labels themselves; the temporary label lives
in the shared label field (the same array that receives the result), which
can be passed in as ``labels``.
"""

from __future__ import annotations

import enum
from array import array

from .errors import (
    CostOutOfRangeError,
    DuplicateEntryError,
    EmptyQueueError,
    MonotonicityError,
    NotInQueueError,
    QueueError,
)

BRICK_CAPACITY = 254
POSITION_BITS = 31
POSITION_MASK = (1 << POSITION_BITS) - 1
NIL = -1


class Variant(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown variant {value!r}; expected one of I, II, III, IV, V") from None


def pack(voxel: int, label: int) -> int:
    """Pack a 1-bit label and a 31-bit position into one 32-bit word."""
    if not 0 <= voxel <= POSITION_MASK:
        raise QueueError(f"position {voxel} does not fit in {POSITION_BITS} bits")
    return (label << POSITION_BITS) | voxel


def unpack(word: int) -> tuple[int, int]:
    return word & POSITION_MASK, word >> POSITION_BITS


class BucketQueue:
    """Shared bucket bookkeeping: cursor, sizes and range checks.

    Subclasses provide ``_heads`` (one entry per bucket, ``None``/``NIL`` when
    empty) plus ``enqueue`` and ``_pop_front``.
    """

    variant: Variant
    _empty = None

    def __init__(self, max_cost: int, n: int):
        if max_cost < 0:
            raise ValueError("max_cost must be non-negative")
        self.max_cost = max_cost
        self.n = n
        self._cursor = 0
        self._size = 0
        self._peak = 0
        self.cursor_advances = 0
        self.total_enqueues = 0
        self.total_pops = 0

    @property
    def n_buckets(self) -> int:
        return self.max_cost + 1

    @property
    def scan_cursor(self) -> int:
        return self._cursor

    def __len__(self) -> int:
        return self._size

    def peak_length(self) -> int:
        return self._peak

    def _check_cost(self, cost: int) -> None:
        if cost > self.max_cost or cost < 0:
            raise CostOutOfRangeError(f"cost {cost} outside [0, {self.max_cost}]")
        if cost < self._cursor:
            raise MonotonicityError(
                f"cost {cost} is below the scan cursor {self._cursor}"
            )

    def _grow(self) -> None:
        self._size += 1
        self.total_enqueues += 1
        if self._size > self._peak:
            self._peak = self._size

    def not_empty(self) -> bool:
        if not self._size:
            return False
        heads = self._heads
        empty = self._empty
        c = self._cursor
        if empty is None:
            while heads[c] is None:
                c += 1
        else:
            while heads[c] == empty:
                c += 1
        self.cursor_advances += c - self._cursor
        self._cursor = c
        return True

    def dequeue_min(self) -> tuple[int, int, int]:
        """Remove and return ``(voxel, cost, label)`` from the lowest bucket."""
        if not self.not_empty():
            raise EmptyQueueError("dequeue_min on an empty queue")
        self._size -= 1
        self.total_pops += 1
        return self._pop_front(self._cursor)

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        """``(voxel, label)`` pairs of one bucket in FIFO order; for inspection."""
        raise NotImplementedError


class FixedVolumeQueue(BucketQueue):
    """Variant I: doubly linked buckets threaded through an n-slot arena.

    Slot ``v`` belongs to voxel ``v``; ``prev``/``next`` hold linear indices
    with ``NIL`` as the terminator.
    """

    variant = Variant.I
    _empty = NIL

    def __init__(self, max_cost: int, n: int, labels: bytearray | None = None):
        super().__init__(max_cost, n)
        self._prev = [NIL] * n
        self._next = [NIL] * n
        self._cost = [0] * n
        self._in_queue = bytearray(n)
        self._heads = [NIL] * (max_cost + 1)
        self._tails = [NIL] * (max_cost + 1)
        self.labels = labels if labels is not None else bytearray(n)

    def contains(self, voxel: int) -> bool:
        return bool(self._in_queue[voxel])

    def enqueue(self, voxel: int, cost: int, label: int) -> None:
        self._check_cost(cost)
        if self._in_queue[voxel]:
            raise DuplicateEntryError(f"voxel {voxel} is already queued")
        tail = self._tails[cost]
        self._prev[voxel] = tail
        self._next[voxel] = NIL
        if tail == NIL:
            self._heads[cost] = voxel
        else:
            self._next[tail] = voxel
        self._tails[cost] = voxel
        self._cost[voxel] = cost
        self._in_queue[voxel] = 1
        self.labels[voxel] = label
        self._grow()

    def _unlink(self, voxel: int) -> None:
        cost = self._cost[voxel]
        prev, nxt = self._prev[voxel], self._next[voxel]
        if prev == NIL:
            self._heads[cost] = nxt
        else:
            self._next[prev] = nxt
        if nxt == NIL:
            self._tails[cost] = prev
        else:
            self._prev[nxt] = prev
        self._prev[voxel] = self._next[voxel] = NIL
        self._in_queue[voxel] = 0

    def _pop_front(self, cost: int) -> tuple[int, int, int]:
        voxel = self._heads[cost]
        self._unlink(voxel)
        return voxel, cost, self.labels[voxel]

    def remove(self, voxel: int) -> None:
        if not self._in_queue[voxel]:
            raise NotInQueueError(f"voxel {voxel} is not queued")
        self._unlink(voxel)
        self._size -= 1

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        out = []
        v = self._heads[cost]
        while v != NIL:
            out.append((v, self.labels[v]))
            v = self._next[v]
        return out


class _Link2:
    __slots__ = ("cost", "voxel", "prev", "next")

    def __init__(self, cost, voxel, prev):
        self.cost = cost
        self.voxel = voxel
        self.prev = prev
        self.next = None


class DynamicListQueue(BucketQueue):
    """Variant II: heap-allocated doubly linked elements, one per queued voxel."""

    variant = Variant.II

    def __init__(self, max_cost: int, n: int, labels: bytearray | None = None):
        super().__init__(max_cost, n)
        self._table: list[_Link2 | None] = [None] * n
        self._heads: list[_Link2 | None] = [None] * (max_cost + 1)
        self._tails: list[_Link2 | None] = [None] * (max_cost + 1)
        self.labels = labels if labels is not None else bytearray(n)

    def contains(self, voxel: int) -> bool:
        return self._table[voxel] is not None

    def enqueue(self, voxel: int, cost: int, label: int) -> None:
        self._check_cost(cost)
        if self._table[voxel] is not None:
            raise DuplicateEntryError(f"voxel {voxel} is already queued")
        tail = self._tails[cost]
        elem = _Link2(cost, voxel, tail)
        if tail is None:
            self._heads[cost] = elem
        else:
            tail.next = elem
        self._tails[cost] = elem
        self._table[voxel] = elem
        self.labels[voxel] = label
        self._grow()

    def _unlink(self, elem: _Link2) -> None:
        if elem.prev is None:
            self._heads[elem.cost] = elem.next
        else:
            elem.prev.next = elem.next
        if elem.next is None:
            self._tails[elem.cost] = elem.prev
        else:
            elem.next.prev = elem.prev
        self._table[elem.voxel] = None

    def _pop_front(self, cost: int) -> tuple[int, int, int]:
        elem = self._heads[cost]
        self._unlink(elem)
        return elem.voxel, cost, self.labels[elem.voxel]

    def remove(self, voxel: int) -> None:
        elem = self._table[voxel]
        if elem is None:
            raise NotInQueueError(f"voxel {voxel} is not queued")
        self._unlink(elem)
        self._size -= 1

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        out = []
        e = self._heads[cost]
        while e is not None:
            out.append((e.voxel, self.labels[e.voxel]))
            e = e.next
        return out


class _Link3:
    __slots__ = ("cost", "label", "voxel", "next")

    def __init__(self, cost, label, voxel):
        self.cost = cost
        self.label = label
        self.voxel = voxel
        self.next = None


class LazyListQueue(BucketQueue):
    """Variant III: no physical removal; improved voxels get a fresh entry.

    A per-voxel table points at the voxel's current-best entry. Older entries
    stay in their buckets and are reported through :attr:`last_pop_stale`
    when they come out.
    """

    variant = Variant.III

    def __init__(self, max_cost: int, n: int):
        super().__init__(max_cost, n)
        self._table: list[_Link3 | None] = [None] * n
        self._heads: list[_Link3 | None] = [None] * (max_cost + 1)
        self._tails: list[_Link3 | None] = [None] * (max_cost + 1)
        self.last_pop_stale = False

    def contains(self, voxel: int) -> bool:
        return self._table[voxel] is not None

    def best_cost(self, voxel: int) -> int | None:
        """Cost of the voxel's current-best entry, ``None`` if it has none."""
        elem = self._table[voxel]
        return None if elem is None else elem.cost

    def enqueue(self, voxel: int, cost: int, label: int) -> None:
        self._check_cost(cost)
        elem = _Link3(cost, label, voxel)
        tail = self._tails[cost]
        if tail is None:
            self._heads[cost] = elem
        else:
            tail.next = elem
        self._tails[cost] = elem
        self._table[voxel] = elem
        self._grow()

    def supersede(self, voxel: int, new_cost: int, new_label: int) -> None:
        current = self._table[voxel]
        if current is None:
            raise NotInQueueError(f"voxel {voxel} has no entry to supersede")
        if new_cost >= current.cost:
            raise QueueError(
                f"supersede needs a strictly lower cost ({new_cost} >= {current.cost})"
            )
        self.enqueue(voxel, new_cost, new_label)

    def _pop_front(self, cost: int) -> tuple[int, int, int]:
        elem = self._heads[cost]
        self._heads[cost] = elem.next
        if elem.next is None:
            self._tails[cost] = None
        if self._table[elem.voxel] is elem:
            self._table[elem.voxel] = None
            self.last_pop_stale = False
        else:
            self.last_pop_stale = True
        return elem.voxel, cost, elem.label

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        out = []
        e = self._heads[cost]
        while e is not None:
            out.append((e.voxel, e.label))
            e = e.next
        return out


class _Link4:
    __slots__ = ("word", "next")

    def __init__(self, word):
        self.word = word
        self.next = None


class PackedListQueue(BucketQueue):
    """Variant IV: singly linked packed words; the cost is the bucket index."""

    variant = Variant.IV

    def __init__(self, max_cost: int, n: int):
        super().__init__(max_cost, n)
        self._heads: list[_Link4 | None] = [None] * (max_cost + 1)
        self._tails: list[_Link4 | None] = [None] * (max_cost + 1)

    def enqueue(self, voxel: int, cost: int, label: int) -> None:
        self._check_cost(cost)
        elem = _Link4((label << POSITION_BITS) | voxel)
        tail = self._tails[cost]
        if tail is None:
            self._heads[cost] = elem
        else:
            tail.next = elem
        self._tails[cost] = elem
        self._grow()

    def _pop_front(self, cost: int) -> tuple[int, int, int]:
        elem = self._heads[cost]
        self._heads[cost] = elem.next
        if elem.next is None:
            self._tails[cost] = None
        word = elem.word
        return word & POSITION_MASK, cost, word >> POSITION_BITS

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        out = []
        e = self._heads[cost]
        while e is not None:
            out.append(unpack(e.word))
            e = e.next
        return out


class Brick:
    """Fixed block of packed words; ``first``/``last`` bound the occupied run."""

    __slots__ = ("slots", "next", "first", "last")

    def __init__(self):
        self.slots = array("I", bytes(4 * BRICK_CAPACITY))
        self.next: Brick | None = None
        self.first = 0
        self.last = 0

    def __len__(self):
        return self.last - self.first

    def __repr__(self):
        return f"Brick(F={self.first}, L={self.last})"


class BrickQueue(BucketQueue):
    """Variant V: buckets are chains of 254-entry bricks.

    New words go to slot ``last`` of the bucket's tail brick; a full tail gets
    a successor, taken from the empty-brick stack when one is available.
    Drained bricks go back on that stack.
    """

    variant = Variant.V

    def __init__(self, max_cost: int, n: int):
        super().__init__(max_cost, n)
        self._heads: list[Brick | None] = [None] * (max_cost + 1)
        self._tails: list[Brick | None] = [None] * (max_cost + 1)
        self.empty_bricks: list[Brick] = []
        self.bricks_in_use = 0
        self.bricks_peak = 0
        self.bricks_allocated = 0
        self.bricks_reused = 0

    @property
    def brick_acquisitions(self) -> int:
        return self.bricks_allocated + self.bricks_reused

    def _acquire_brick(self) -> Brick:
        if self.empty_bricks:
            brick = self.empty_bricks.pop()
            brick.first = brick.last = 0
            brick.next = None
            self.bricks_reused += 1
        else:
            brick = Brick()
            self.bricks_allocated += 1
        self.bricks_in_use += 1
        if self.bricks_in_use > self.bricks_peak:
            self.bricks_peak = self.bricks_in_use
        return brick

    def _release_brick(self, brick: Brick) -> None:
        brick.next = None
        self.bricks_in_use -= 1
        self.empty_bricks.append(brick)

    def enqueue(self, voxel: int, cost: int, label: int) -> None:
        self._check_cost(cost)
        tail = self._tails[cost]
        if tail is None:
            tail = self._acquire_brick()
            self._heads[cost] = self._tails[cost] = tail
        elif tail.last == BRICK_CAPACITY:
            fresh = self._acquire_brick()
            tail.next = fresh
            self._tails[cost] = tail = fresh
        tail.slots[tail.last] = (label << POSITION_BITS) | voxel
        tail.last += 1
        self._grow()

    def _pop_front(self, cost: int) -> tuple[int, int, int]:
        brick = self._heads[cost]
        word = brick.slots[brick.first]
        brick.first += 1
        if brick.first == brick.last:
            nxt = brick.next
            self._heads[cost] = nxt
            if nxt is None:
                self._tails[cost] = None
            self._release_brick(brick)
        return word & POSITION_MASK, cost, word >> POSITION_BITS

    def bricks(self, cost: int) -> list[Brick]:
        out = []
        b = self._heads[cost]
        while b is not None:
            out.append(b)
            b = b.next
        return out

    def bucket_contents(self, cost: int) -> list[tuple[int, int]]:
        return [
            unpack(b.slots[i]) for b in self.bricks(cost) for i in range(b.first, b.last)
        ]

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if the brick layout is inconsistent."""
        total = 0
        in_buckets = 0
        for c in range(self.n_buckets):
            chain = self.bricks(c)
            if not chain:
                assert self._tails[c] is None, f"bucket {c}: tail without head"
                continue
            assert self._tails[c] is chain[-1], f"bucket {c}: tail mismatch"
            for b in chain:
                assert 0 <= b.first < b.last <= BRICK_CAPACITY, f"bucket {c}: {b}"
                total += b.last - b.first
            for b in chain[:-1]:
                assert b.last == BRICK_CAPACITY, f"bucket {c}: non-tail brick not full"
            in_buckets += len(chain)
        assert total == self._size, f"sum(L-F)={total} but size={self._size}"
        assert in_buckets == self.bricks_in_use
        ids = {id(b) for b in self.empty_bricks}
        assert len(ids) == len(self.empty_bricks)
        for c in range(self.n_buckets):
            for b in self.bricks(c):
                assert id(b) not in ids, "brick both queued and on the empty stack"


QUEUE_CLASSES = {
    Variant.I: FixedVolumeQueue,
    Variant.II: DynamicListQueue,
    Variant.III: LazyListQueue,
    Variant.IV: PackedListQueue,
    Variant.V: BrickQueue,
}


def make_queue(variant, max_cost: int, n: int, labels: bytearray | None = None) -> BucketQueue:
    variant = Variant.parse(variant)
    cls = QUEUE_CLASSES[variant]
    if variant in (Variant.I, Variant.II):
        return cls(max_cost, n, labels)
    return cls(max_cost, n)
