"""Depth-first closed itemset miner with a fixed minimum support.

A reference point for the anytime miners: the same closure machinery and the
same child generation, but subtrees are finished one at a time instead of
being binned by support, so there is no checkpoint ordering. Roots are
visited from the most frequent item down.
"""

from __future__ import annotations

import time
from typing import Optional

from .closure import ItemsetInterval, above_mask, has_universal_item, universal_items
from .datamodel import TransactionDatabase
from .events import ClosedItemsetEmitted, Exhausted, Interrupted, MinerControl, MinerStats, Sink, Terminal
from .miner import generate_closed_children


def baseline_mine(
    db: TransactionDatabase,
    sink: Optional[Sink] = None,
    control: Optional[MinerControl] = None,
    minsup: int = 1,
) -> Terminal:
    if minsup < 1:
        raise ValueError("minsup must be at least 1")
    control = control or MinerControl()
    started = time.perf_counter()
    emitted = 0

    def finish(event: Terminal) -> Terminal:
        if sink is not None:
            sink(event)
        return event

    for rank in reversed(range(db.n)):
        cover = db.item_masks[rank]
        support = cover.bit_count()
        if support < minsup or has_universal_item(db, cover, (1 << rank) - 1):
            continue
        p = 1 << rank
        stack = [ItemsetInterval(p, p | universal_items(db, cover, above_mask(db, rank)), cover, support)]
        while stack:
            if control.interrupt_requested:
                return finish(Interrupted(None, mid_bin=True))
            node = stack.pop()
            if sink is not None:
                sink(ClosedItemsetEmitted(node))
            emitted += 1
            control.stats = MinerStats(None, None, 0, emitted, time.perf_counter() - started)
            children = list(generate_closed_children(node, db, minsup))
            stack.extend(reversed(children))
    return finish(Exhausted(None))
