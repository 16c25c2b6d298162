"""Brute-force ground truth for small databases.

Only the datamodel is shared with the miners: covers come from plain tidset
intersection, closedness from intersecting the covering transactions. Nothing
here uses closure shortcuts or the support index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional

from .datamodel import Tidset, TransactionDatabase, intersect

DEFAULT_BUDGET = 2**22

Itemset = tuple[int, ...]


class OracleBudgetExceeded(RuntimeError):
    def __init__(self, reached: int, budget: int):
        super().__init__(f"enumeration reached {reached} itemsets, budget is {budget}")
        self.reached = reached
        self.budget = budget


class InconsistencyError(AssertionError):
    """A partial output claims an itemset or support the reference does not have."""


@dataclass
class ReferenceIndex:
    support: dict[Itemset, int] = field(default_factory=dict)
    by_support: dict[int, set[Itemset]] = field(default_factory=dict)
    closed_by_support: dict[int, set[Itemset]] = field(default_factory=dict)

    @property
    def distinct_supports(self) -> list[int]:
        return sorted(self.by_support, reverse=True)

    @property
    def closed(self) -> dict[Itemset, int]:
        return {x: s for s, xs in self.closed_by_support.items() for x in xs}

    def at_least(self, minsup: int, closed: bool = False) -> dict[Itemset, int]:
        table = self.closed_by_support if closed else self.by_support
        return {x: s for s, xs in table.items() if s >= minsup for x in xs}


def _common_items(db: TransactionDatabase, tids: Tidset) -> frozenset[int]:
    common: Optional[frozenset[int]] = None
    for t in tids:
        row = frozenset(db.transactions[t])
        common = row if common is None else common & row
    return common or frozenset()


def enumerate_all(db: TransactionDatabase, budget: int = DEFAULT_BUDGET) -> ReferenceIndex:
    """Every itemset with non-empty cover, depth-first, with its support."""
    ref = ReferenceIndex()
    covers = db.item_covers
    count = 0
    stack: list[tuple[Itemset, Tidset]] = [((r,), covers[r]) for r in reversed(range(db.n)) if covers[r]]
    while stack:
        itemset, cover = stack.pop()
        count += 1
        if count > budget:
            raise OracleBudgetExceeded(count, budget)
        s = len(cover)
        ref.support[itemset] = s
        ref.by_support.setdefault(s, set()).add(itemset)
        if _common_items(db, cover) == frozenset(itemset):
            ref.closed_by_support.setdefault(s, set()).add(itemset)
        for r in reversed(range(itemset[-1] + 1, db.n)):
            child = intersect(cover, covers[r])
            if child:
                stack.append((itemset + (r,), child))
    return ref


def completeness_profile(
    reference: ReferenceIndex,
    partial: Iterable[tuple[Itemset, int]],
    closed: bool = False,
) -> dict[int, float]:
    """Fraction of each support level's itemsets present in ``partial``."""
    table = reference.closed_by_support if closed else reference.by_support
    truth = reference.closed if closed else reference.support
    found: dict[int, set[Itemset]] = {}
    for itemset, s in partial:
        itemset = tuple(itemset)
        if truth.get(itemset) != s:
            raise InconsistencyError(f"{itemset} claimed at support {s}, reference has {truth.get(itemset)}")
        found.setdefault(s, set()).add(itemset)
    return {s: len(found.get(s, ())) / len(xs) for s, xs in sorted(table.items(), reverse=True)}


def reached_minsup(emitted: Iterable[Hashable], by_support: Mapping[int, Iterable[Hashable]]) -> Optional[int]:
    """Lowest support s such that every reference pattern with support >= s was emitted.

    None when not even the top support level is complete.
    """
    seen = set(emitted)
    reached = None
    for s in sorted(by_support, reverse=True):
        if all(x in seen for x in by_support[s]):
            reached = s
        else:
            break
    return reached
