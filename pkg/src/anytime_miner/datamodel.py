"""Transaction databases: FIMI parsing, support-ordered item recoding, covers.

Items are recoded to ranks ``0..n-1`` so that a lower rank never has a higher
singleton support. Covers (tidsets) are stored as Python integers used as
bitsets, which keeps intersection and cardinality cheap while iteration still
yields transaction ids in ascending order.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence, Union

MAX_ITEM_ID = 2**63 - 1


class ParseError(ValueError):
    """Malformed FIMI input. Carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Tidset:
    """Strictly ascending set of transaction ids, backed by a bitmask."""

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        self.mask = mask

    @classmethod
    def from_tids(cls, tids: Iterable[int]) -> "Tidset":
        mask = 0
        for t in tids:
            if t < 0:
                raise ValueError(f"negative tid {t}")
            mask |= 1 << t
        return cls(mask)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, tid: int) -> bool:
        return tid >= 0 and (self.mask >> tid) & 1 == 1

    def __and__(self, other: "Tidset") -> "Tidset":
        return Tidset(self.mask & other.mask)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Tidset):
            return self.mask == other.mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.mask)

    def __le__(self, other: "Tidset") -> bool:
        return self.mask & other.mask == self.mask

    def tids(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"Tidset({list(self)})"


def intersect(a: Tidset, b: Tidset) -> Tidset:
    return Tidset(a.mask & b.mask)


@dataclass(frozen=True)
class RawDatabase:
    """Transactions over external (non-negative integer) item ids, in file order."""

    transactions: tuple[frozenset[int], ...]

    @property
    def m(self) -> int:
        return len(self.transactions)


@dataclass(frozen=True)
class ItemOrder:
    """Bijection between external ids and support-ordered ranks."""

    recode: dict[int, int]
    decode: tuple[int, ...]
    singleton_support: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.decode)

    def external(self, ranks: Iterable[int]) -> tuple[int, ...]:
        """Ranks to external ids, sorted ascending by external id."""
        return tuple(sorted(self.decode[r] for r in ranks))


@dataclass(frozen=True)
class TransactionDatabase:
    """Recoded database with per-rank covers.

    ``transactions[t]`` is the ascending tuple of ranks in transaction ``t``;
    ``item_masks[r]`` is the bitmask of tids containing rank ``r``.
    """

    transactions: tuple[tuple[int, ...], ...]
    item_masks: tuple[int, ...]
    order: ItemOrder
    transaction_masks: tuple[int, ...] = field(repr=False, default=())

    @property
    def n(self) -> int:
        return len(self.item_masks)

    @property
    def m(self) -> int:
        return len(self.transactions)

    @property
    def item_covers(self) -> tuple[Tidset, ...]:
        return tuple(Tidset(mask) for mask in self.item_masks)

    def cover(self, rank: int) -> Tidset:
        return Tidset(self.item_masks[rank])

    @property
    def all_tids(self) -> int:
        return (1 << self.m) - 1

    @classmethod
    def from_raw(cls, raw: RawDatabase) -> "TransactionDatabase":
        return recode(raw, build_order(raw))

    @classmethod
    def from_transactions(cls, transactions: Iterable[Iterable[int]]) -> "TransactionDatabase":
        return cls.from_raw(RawDatabase(tuple(frozenset(t) for t in transactions)))


def parse_fimi(source: Union[bytes, str, IO]) -> RawDatabase:
    """Parse FIMI text: one transaction per line, whitespace-separated item ids.

    Empty lines are empty transactions. A trailing newline does not start an
    extra transaction. Duplicate ids within a line are collapsed.
    """
    if isinstance(source, bytes):
        text = source.decode("ascii", errors="replace")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("ascii", errors="replace") if isinstance(data, bytes) else data

    if not text:
        return RawDatabase(())
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()

    transactions = []
    for lineno, line in enumerate(lines, start=1):
        if line.endswith("\r"):
            line = line[:-1]
        items = set()
        for token in line.replace("\t", " ").split(" "):
            if not token:
                continue
            if not token.isdigit() or not token.isascii():
                raise ParseError(lineno, f"invalid item id {token!r}")
            value = int(token)
            if value > MAX_ITEM_ID:
                raise ParseError(lineno, f"item id {token} overflows 64-bit range")
            items.add(value)
        transactions.append(frozenset(items))
    return RawDatabase(tuple(transactions))


def load_fimi(path: Union[str, os.PathLike]) -> RawDatabase:
    with open(path, "rb") as fh:
        return parse_fimi(fh)


def build_order(db: RawDatabase) -> ItemOrder:
    """Rank items by ascending (singleton support, external id)."""
    counts: dict[int, int] = {}
    for t in db.transactions:
        for item in t:
            counts[item] = counts.get(item, 0) + 1
    decode = tuple(sorted(counts, key=lambda item: (counts[item], item)))
    recode_map = {item: rank for rank, item in enumerate(decode)}
    return ItemOrder(recode_map, decode, tuple(counts[item] for item in decode))


def recode(db: RawDatabase, order: ItemOrder) -> TransactionDatabase:
    masks = [0] * order.n
    transactions = []
    tmasks = []
    for tid, raw in enumerate(db.transactions):
        ranks = tuple(sorted(order.recode[item] for item in raw if item in order.recode))
        bit = 1 << tid
        tmask = 0
        for r in ranks:
            masks[r] |= bit
            tmask |= 1 << r
        transactions.append(ranks)
        tmasks.append(tmask)
    return TransactionDatabase(tuple(transactions), tuple(masks), order, tuple(tmasks))


def load_database(source: Union[str, os.PathLike, bytes, IO]) -> TransactionDatabase:
    """Parse + order + recode in one step. Paths are opened; bytes/streams parsed."""
    if isinstance(source, (str, os.PathLike)) and not isinstance(source, bytes):
        raw = load_fimi(source)
    else:
        raw = parse_fimi(source)
    return TransactionDatabase.from_raw(raw)


def to_fimi(transactions: Sequence[Iterable[int]]) -> str:
    buf = io.StringIO()
    for t in transactions:
        buf.write(" ".join(str(i) for i in sorted(t)))
        buf.write("\n")
    return buf.getvalue()
