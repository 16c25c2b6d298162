"""Support index: pending itemset intervals binned by support.

Bins are drained strictly from the highest support downwards. Every interval
created while a bin is being drained has a lower support than that bin, so a
drained bin is never reopened and can be discarded.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .closure import ItemsetInterval, above_mask, has_universal_item, universal_items
from .datamodel import TransactionDatabase


class FrontierViolation(RuntimeError):
    """An interval was inserted at or above the support currently being drained."""


@dataclass
class Bin:
    support: int
    pending: deque = field(default_factory=deque)
    emitted_count: int = 0

    def __len__(self) -> int:
        return len(self.pending)


class SupportIndex:
    def __init__(self) -> None:
        self._bins: dict[int, Bin] = {}
        self._heap: list[int] = []
        self.current_support: Optional[int] = None
        self.drained: dict[int, int] = {}
        self.inserted_total = 0
        self.lowest_inserted: Optional[int] = None

    @classmethod
    def from_database(cls, db: TransactionDatabase, closed_only: bool = False) -> "SupportIndex":
        """One interval (I, I*) per singleton, in ascending rank order.

        With ``closed_only``, singletons whose closure pulls in a lower-ranked
        item are left out, since their I* is not closed.
        """
        index = cls()
        for rank, cover in enumerate(db.item_masks):
            if not cover:
                continue
            if closed_only and has_universal_item(db, cover, (1 << rank) - 1):
                continue
            p = 1 << rank
            q = p | universal_items(db, cover, above_mask(db, rank))
            index.insert(ItemsetInterval(p, q, cover, cover.bit_count()))
        return index

    def insert(self, interval: ItemsetInterval) -> None:
        support = interval.support
        if self.current_support is not None and support >= self.current_support:
            raise FrontierViolation(
                f"interval with support {support} inserted while draining {self.current_support}"
            )
        b = self._bins.get(support)
        if b is None:
            b = self._bins[support] = Bin(support)
            heapq.heappush(self._heap, -support)
        b.pending.append(interval)
        self.inserted_total += 1
        if self.lowest_inserted is None or support < self.lowest_inserted:
            self.lowest_inserted = support

    def next_bin(self) -> Optional[Bin]:
        """Highest-support bin with pending intervals, or None when exhausted."""
        while self._heap:
            support = -self._heap[0]
            b = self._bins[support]
            if b.pending:
                self.current_support = support
                return b
            heapq.heappop(self._heap)
            self._retire(b)
        return None

    def peek_support(self) -> Optional[int]:
        for support in sorted(self._bins, reverse=True):
            if self._bins[support].pending:
                return support
        return None

    def finish_bin(self, b: Bin) -> None:
        if b.pending:
            raise FrontierViolation(f"bin {b.support} finished with {len(b.pending)} pending")
        if self._heap and -self._heap[0] == b.support:
            heapq.heappop(self._heap)
        self._retire(b)

    def _retire(self, b: Bin) -> None:
        if self._bins.pop(b.support, None) is not None:
            self.drained[b.support] = self.drained.get(b.support, 0) + b.emitted_count

    @property
    def supports(self) -> list[int]:
        """Keys of live bins, descending."""
        return sorted(self._bins, reverse=True)

    def pending_count(self) -> int:
        return sum(len(b.pending) for b in self._bins.values())

    def __len__(self) -> int:
        return len(self._bins)

    def bin(self, support: int) -> Bin:
        return self._bins[support]
