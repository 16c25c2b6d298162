"""Text lines for pattern streams. Items are printed as external ids, ascending."""

from __future__ import annotations

from typing import Iterable, Optional

from .closure import iter_expand, items_of
from .datamodel import ItemOrder


def ids(items: Iterable[int]) -> str:
    return ",".join(str(i) for i in items)


def interval_line(order: ItemOrder, support: int, p: int, q: int) -> str:
    return f"sup={support}\tP={ids(order.external(items_of(p)))}\tQ={ids(order.external(items_of(q)))}"


def itemset_line(support: int, external_items: Iterable[int], closed: Optional[bool] = None) -> str:
    line = f"sup={support}\t{ids(external_items)}"
    if closed:
        line += "\tclosed"
    return line


def expanded_lines(order: ItemOrder, interval) -> list[str]:
    return [itemset_line(interval.support, order.external(x)) for x in iter_expand(interval)]


def checkpoint_line(minsup: int, elapsed_seconds: float) -> str:
    return f"#CHECKPOINT {minsup} {int(round(elapsed_seconds * 1000))}"


def end_line(status: str, last_minsup: Optional[int], mid_bin: bool = False) -> str:
    certified = "none" if last_minsup is None else str(last_minsup)
    extra = " mid_bin=1" if mid_bin else ""
    return f"#END {status} last_certified_minsup={certified}{extra}"


def strip_timing(text: str) -> str:
    """Drop the elapsed field of checkpoint lines, for byte comparisons."""
    out = []
    for line in text.splitlines(keepends=True):
        if line.startswith("#CHECKPOINT "):
            head = line.split(" ")[:2]
            line = " ".join(head) + "\n"
        out.append(line)
    return "".join(out)
