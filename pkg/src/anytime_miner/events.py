"""Events streamed by the miners, and the cooperative interrupt control."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Union

from .closure import Itemset, ItemsetInterval

MAX_COUNT = 2**63 - 1


class Kind(str, Enum):
    ALL = "all-itemsets"
    CLOSED = "closed-itemsets"


@dataclass(frozen=True)
class Checkpoint:
    """Every (closed) itemset with support >= ``minsup`` has been emitted."""

    minsup: int
    kind: Kind
    intervals_emitted_total: int
    itemsets_certified_total: int
    elapsed: float
    index: int = 0


@dataclass(frozen=True)
class IntervalEmitted:
    interval: ItemsetInterval

    @property
    def support(self) -> int:
        return self.interval.support


@dataclass(frozen=True)
class ClosedItemsetEmitted:
    interval: ItemsetInterval

    @property
    def itemset(self) -> Itemset:
        return self.interval.max_itemset

    @property
    def mask(self) -> int:
        return self.interval.q

    @property
    def support(self) -> int:
        return self.interval.support


@dataclass(frozen=True)
class CheckpointIssued:
    checkpoint: Checkpoint


@dataclass(frozen=True)
class Exhausted:
    last_checkpoint: Optional[Checkpoint]


@dataclass(frozen=True)
class FloorReached:
    """Stopped because the next bin lies below ``stop_at_support``."""

    last_checkpoint: Optional[Checkpoint]
    floor: int


@dataclass(frozen=True)
class Interrupted:
    last_checkpoint: Optional[Checkpoint]
    mid_bin: bool = False


Emission = Union[IntervalEmitted, ClosedItemsetEmitted]
Terminal = Union[Exhausted, FloorReached, Interrupted]
MinerEvent = Union[IntervalEmitted, ClosedItemsetEmitted, CheckpointIssued, Exhausted, FloorReached, Interrupted]
Sink = Callable[[MinerEvent], None]


def status_of(event: Terminal) -> str:
    if isinstance(event, Exhausted):
        return "exhausted"
    if isinstance(event, FloorReached):
        return "floor"
    return "interrupted"


class MinerStats(NamedTuple):
    current_support: Optional[int]
    last_minsup: Optional[int]
    checkpoints: int
    emitted: int
    elapsed: float


class MinerControl:
    """Interrupt flags plus the miner's published progress counters.

    ``request_interrupt`` is honored at the next bin boundary, so the run ends
    on a checkpoint. ``request_abort`` stops after the current interval and
    leaves the current bin uncertified. ``stats`` is replaced wholesale by the
    miner, so readers on other threads always see a consistent tuple.
    """

    def __init__(self) -> None:
        self._interrupt = threading.Event()
        self._abort = threading.Event()
        self.stats = MinerStats(None, None, 0, 0, 0.0)

    def request_interrupt(self) -> None:
        self._interrupt.set()

    def request_abort(self) -> None:
        self._interrupt.set()
        self._abort.set()

    @property
    def interrupt_requested(self) -> bool:
        return self._interrupt.is_set()

    @property
    def abort_requested(self) -> bool:
        return self._abort.is_set()
