"""Covers, closures and itemset intervals.

An itemset is a strictly ascending tuple of ranks. Internally the miners keep
itemsets as bitmasks over ranks; ``items_of`` and ``mask_of`` convert.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .datamodel import Tidset, TransactionDatabase

Itemset = tuple[int, ...]

DEFAULT_EXPAND_BUDGET = 2**20


class EmptyCoverError(ValueError):
    """I(S) requested for an empty transaction set."""


class ExpansionTooLarge(ValueError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"interval expands to {size} itemsets, budget is {budget}")
        self.size = size
        self.budget = budget


def mask_of(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def items_of(mask: int) -> Itemset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def tail(mask: int) -> int:
    """Largest rank in a non-empty itemset mask."""
    return mask.bit_length() - 1


@dataclass(frozen=True, slots=True)
class ItemsetInterval:
    """All Y with P <= Y <= Q; every member has the cover of P.

    ``p`` and ``q`` are rank bitmasks, ``cover`` a tid bitmask.
    """

    p: int
    q: int
    cover: int
    support: int

    @property
    def min_itemset(self) -> Itemset:
        return items_of(self.p)

    @property
    def max_itemset(self) -> Itemset:
        return items_of(self.q)

    @property
    def tidset(self) -> Tidset:
        return Tidset(self.cover)

    @property
    def width(self) -> int:
        """Number of free items, |Q \\ P|."""
        return (self.q & ~self.p).bit_count()

    @property
    def size(self) -> int:
        return 1 << self.width

    def __contains__(self, itemset: Iterable[int]) -> bool:
        mask = mask_of(itemset)
        return mask & self.p == self.p and mask & ~self.q == 0

    @classmethod
    def of(cls, db: TransactionDatabase, p: Iterable[int], q: Iterable[int]) -> "ItemsetInterval":
        p_mask, q_mask = mask_of(p), mask_of(q)
        if p_mask & ~q_mask:
            raise ValueError("min itemset must be a subset of max itemset")
        cover = cover_of(db, items_of(p_mask))
        return cls(p_mask, q_mask, cover.mask, len(cover))


def cover_of(db: TransactionDatabase, itemset: Iterable[int]) -> Tidset:
    mask = db.all_tids
    seen = False
    for r in itemset:
        mask &= db.item_masks[r]
        seen = True
    if not seen:
        raise ValueError("cover of the empty itemset is not defined here")
    return Tidset(mask)


def intersection_closure(db: TransactionDatabase, tids: Tidset) -> Itemset:
    """Items common to every transaction in ``tids``, by occurrence counting."""
    size = len(tids)
    if size == 0:
        raise EmptyCoverError("intersection of an empty transaction set")
    counts = [0] * db.n
    for t in tids:
        for r in db.transactions[t]:
            counts[r] += 1
    return tuple(r for r, c in enumerate(counts) if c == size)


def universal_items(db: TransactionDatabase, cover: int, candidates: int) -> int:
    """Subset of ``candidates`` (rank mask) present in every transaction of ``cover``.

    Only items of one witness transaction can qualify, so the scan is bounded
    by that transaction's length rather than by n.
    """
    witness = (cover & -cover).bit_length() - 1
    cand = db.transaction_masks[witness] & candidates
    found = 0
    masks = db.item_masks
    while cand:
        low = cand & -cand
        if masks[low.bit_length() - 1] & cover == cover:
            found |= low
        cand ^= low
    return found


def has_universal_item(db: TransactionDatabase, cover: int, candidates: int) -> bool:
    witness = (cover & -cover).bit_length() - 1
    cand = db.transaction_masks[witness] & candidates
    masks = db.item_masks
    while cand:
        low = cand & -cand
        if masks[low.bit_length() - 1] & cover == cover:
            return True
        cand ^= low
    return False


def above_mask(db: TransactionDatabase, rank: int) -> int:
    """Mask of all ranks strictly greater than ``rank``."""
    return ((1 << db.n) - 1) & ~((1 << (rank + 1)) - 1)


def closure_extension(db: TransactionDatabase, itemset: Iterable[int], cover: Tidset) -> Itemset:
    """X* = X plus every item above tail(X) shared by all of X's transactions."""
    x = mask_of(itemset)
    if not x:
        raise ValueError("closure of the empty itemset is not defined here")
    if not cover:
        raise EmptyCoverError("itemset has an empty cover")
    return items_of(x | universal_items(db, cover.mask, above_mask(db, tail(x))))


def is_closed(db: TransactionDatabase, itemset: Iterable[int]) -> bool:
    items = tuple(itemset)
    return intersection_closure(db, cover_of(db, items)) == tuple(sorted(items))


def iter_expand(interval: ItemsetInterval) -> Iterator[Itemset]:
    free = items_of(interval.q & ~interval.p)
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            yield items_of(interval.p | mask_of(extra))


def expand(interval: ItemsetInterval, budget: int = DEFAULT_EXPAND_BUDGET) -> set[Itemset]:
    """Every itemset between P and Q. Refuses intervals larger than ``budget``."""
    if interval.size > budget:
        raise ExpansionTooLarge(interval.size, budget)
    return set(iter_expand(interval))
