"""Anytime miners for all itemsets and for closed itemsets.

Both drain the support index bin by bin, highest support first. Exploring an
interval (P, Q) extends P with every item j above tail(P) that is not in Q,
scanning j downwards from the highest rank. The child R = P + {j} gets the
interval (R, R* | Q) and lands in the bin of sup(R), which is always below
the bin being drained. After a bin is drained a checkpoint certifies every
itemset at or above its support.
"""

from __future__ import annotations

import time
from typing import Callable, Iterable, Optional

from .closure import ItemsetInterval, mask_of, tail
from .datamodel import Tidset, TransactionDatabase
from .events import (
    MAX_COUNT,
    Checkpoint,
    CheckpointIssued,
    ClosedItemsetEmitted,
    Exhausted,
    FloorReached,
    IntervalEmitted,
    Interrupted,
    Kind,
    MinerControl,
    MinerStats,
    Sink,
    Terminal,
)
from .support_index import SupportIndex


def _discard(event) -> None:
    pass


def explore(
    interval: ItemsetInterval,
    db: TransactionDatabase,
    index: SupportIndex,
    sink: Optional[Sink] = None,
) -> int:
    """Emit ``interval`` and index its children. Returns the number inserted."""
    if sink is not None:
        sink(IntervalEmitted(interval))
    p, q, cover = interval.p, interval.q, interval.cover
    masks = db.item_masks
    tmasks = db.transaction_masks
    inserted = 0
    for j in range(db.n - 1, tail(p), -1):
        if (q >> j) & 1:
            continue
        c = cover & masks[j]
        if not c:
            continue
        r = p | (1 << j)
        # R*: items above j shared by all of T(R); only the witness's items qualify
        cand = (tmasks[(c & -c).bit_length() - 1] >> (j + 1) << (j + 1)) & ~q
        s = r | q
        while cand:
            low = cand & -cand
            if masks[low.bit_length() - 1] & c == c:
                s |= low
            cand ^= low
        index.insert(ItemsetInterval(r, s, c, c.bit_count()))
        inserted += 1
    return inserted


def _closeness_ok(db: TransactionDatabase, r: int, q: int, c: int, j: int) -> bool:
    """No item below j, outside R and Q, occurs in every transaction of c."""
    cand = db.transaction_masks[(c & -c).bit_length() - 1] & ((1 << j) - 1) & ~(r | q)
    masks = db.item_masks
    while cand:
        low = cand & -cand
        if masks[low.bit_length() - 1] & c == c:
            return False
        cand ^= low
    return True


def closeness_test(db: TransactionDatabase, r: Iterable[int], q: Iterable[int], cover_r: Tidset) -> bool:
    """True iff R* | Q is closed, i.e. equals I(T(R)).

    Items above tail(R) are already in R*, and items of Q are shared by all of
    T(R) because T(R) is inside T(P). So only items below tail(R) outside R
    and Q can break closedness.
    """
    r_mask, q_mask = mask_of(r), mask_of(q)
    if not cover_r:
        raise ValueError("closeness is undefined for an empty cover")
    return _closeness_ok(db, r_mask, q_mask, cover_r.mask, tail(r_mask))


def generate_closed_children(interval: ItemsetInterval, db: TransactionDatabase, min_support: int = 1):
    """Yield the closed child intervals of ``interval`` in scan order."""
    p, q, cover = interval.p, interval.q, interval.cover
    masks = db.item_masks
    tmasks = db.transaction_masks
    for j in range(db.n - 1, tail(p), -1):
        if (q >> j) & 1:
            continue
        c = cover & masks[j]
        if not c:
            continue
        support = c.bit_count()
        if support < min_support:
            continue
        r = p | (1 << j)
        witness = tmasks[(c & -c).bit_length() - 1]
        # closeness first: it rejects most candidates before R* is needed
        cand = witness & ((1 << j) - 1) & ~(r | q)
        closed = True
        while cand:
            low = cand & -cand
            if masks[low.bit_length() - 1] & c == c:
                closed = False
                break
            cand ^= low
        if not closed:
            continue
        s = r | q
        cand = (witness >> (j + 1) << (j + 1)) & ~q
        while cand:
            low = cand & -cand
            if masks[low.bit_length() - 1] & c == c:
                s |= low
            cand ^= low
        yield ItemsetInterval(r, s, c, support)


def explore_closed(
    interval: ItemsetInterval,
    db: TransactionDatabase,
    index: SupportIndex,
    sink: Optional[Sink] = None,
) -> int:
    """Emit the closed itemset Q and index the children whose max itemset is closed."""
    if sink is not None:
        sink(ClosedItemsetEmitted(interval))
    inserted = 0
    for child in generate_closed_children(interval, db):
        index.insert(child)
        inserted += 1
    return inserted


def _drive(
    db: TransactionDatabase,
    kind: Kind,
    sink: Optional[Sink],
    control: Optional[MinerControl],
    stop_at_support: Optional[int],
    on_index: Optional[Callable[[SupportIndex], None]] = None,
) -> Terminal:
    if sink is None:
        sink = _discard
    control = control or MinerControl()
    started = time.perf_counter()
    closed = kind is Kind.CLOSED
    index = SupportIndex.from_database(db, closed_only=closed)
    if on_index is not None:
        on_index(index)
    explorer = explore_closed if closed else explore

    last: Optional[Checkpoint] = None
    checkpoints = 0
    intervals = 0
    certified = 0

    def finish(event: Terminal) -> Terminal:
        sink(event)
        return event

    while True:
        if control.interrupt_requested:
            return finish(Interrupted(last, mid_bin=False))
        b = index.next_bin()
        if b is None:
            return finish(Exhausted(last))
        if stop_at_support is not None and b.support < stop_at_support:
            return finish(FloorReached(last, stop_at_support))
        pending = b.pending
        while pending:
            interval = pending.popleft()
            explorer(interval, db, index, sink)
            b.emitted_count += 1
            intervals += 1
            if certified < MAX_COUNT:
                certified = min(MAX_COUNT, certified + (1 if closed else interval.size))
            control.stats = MinerStats(
                b.support,
                last.minsup if last else None,
                checkpoints,
                intervals,
                time.perf_counter() - started,
            )
            if pending and control.abort_requested:
                return finish(Interrupted(last, mid_bin=True))
        index.finish_bin(b)
        checkpoints += 1
        last = Checkpoint(
            minsup=b.support,
            kind=kind,
            intervals_emitted_total=intervals,
            itemsets_certified_total=certified,
            elapsed=time.perf_counter() - started,
            index=checkpoints,
        )
        control.stats = MinerStats(b.support, b.support, checkpoints, intervals, last.elapsed)
        sink(CheckpointIssued(last))


def mine_all(
    db: TransactionDatabase,
    sink: Optional[Sink] = None,
    control: Optional[MinerControl] = None,
    stop_at_support: Optional[int] = None,
    on_index: Optional[Callable[[SupportIndex], None]] = None,
) -> Terminal:
    """Enumerate every itemset as intervals, in decreasing support order.

    Events go to ``sink``: one IntervalEmitted per explored interval, a
    CheckpointIssued after each drained bin, then the terminal event, which is
    also returned.
    """
    return _drive(db, Kind.ALL, sink, control, stop_at_support, on_index)


def mine_closed(
    db: TransactionDatabase,
    sink: Optional[Sink] = None,
    control: Optional[MinerControl] = None,
    stop_at_support: Optional[int] = None,
    on_index: Optional[Callable[[SupportIndex], None]] = None,
) -> Terminal:
    """Enumerate closed itemsets in decreasing support order, each exactly once."""
    return _drive(db, Kind.CLOSED, sink, control, stop_at_support, on_index)
