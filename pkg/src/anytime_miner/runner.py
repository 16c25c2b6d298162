"""Run a miner under a wall-clock budget while sampling probes.

The miner runs on a worker thread. The runner keeps the clock, samples the
miner's published counters at every multiple of the probe interval, and asks
for an interrupt once the budget is spent. If the miner has not reached a bin
boundary within the grace period it is aborted mid-bin; the last completed
checkpoint is still valid.
"""

from __future__ import annotations

import csv
import io
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional

from .baseline import baseline_mine
from .datamodel import TransactionDatabase
from .events import (
    Checkpoint,
    CheckpointIssued,
    ClosedItemsetEmitted,
    IntervalEmitted,
    Interrupted,
    MinerControl,
    Sink,
    Terminal,
    status_of,
)
from .miner import mine_all, mine_closed
from .oracle import reached_minsup

MINERS = ("all", "closed", "baseline")

REPORT_HEADER = ("probe_seconds", "minsup_reached", "checkpoints", "patterns")
CHECKPOINT_HEADER = ("elapsed_seconds", "minsup", "intervals_total", "itemsets_certified_total")


@dataclass(frozen=True)
class ProbeRecord:
    probe_time: float
    minsup_reached: Optional[int]
    checkpoints_so_far: int
    intervals_or_patterns_so_far: int


@dataclass(frozen=True)
class TimedEmission:
    elapsed: float
    support: int
    p: int
    q: int


@dataclass
class RunReport:
    dataset_id: str
    miner: str
    probes: list[ProbeRecord] = field(default_factory=list)
    checkpoints: list[Checkpoint] = field(default_factory=list)
    status: str = "exhausted"
    elapsed: float = 0.0
    mid_bin: bool = False
    emissions: list[TimedEmission] = field(default_factory=list)

    @property
    def last_certified_minsup(self) -> Optional[int]:
        return self.checkpoints[-1].minsup if self.checkpoints else None

    def minsup_at(self, t: float) -> Optional[int]:
        """Minsup of the last checkpoint issued at or before elapsed time ``t``."""
        reached = None
        for cp in self.checkpoints:
            if cp.elapsed <= t:
                reached = cp.minsup
            else:
                break
        return reached

    def report_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for p in self.probes:
            w.writerow(
                (
                    f"{p.probe_time:.6f}",
                    "" if p.minsup_reached is None else p.minsup_reached,
                    p.checkpoints_so_far,
                    p.intervals_or_patterns_so_far,
                )
            )
        return buf.getvalue()

    def checkpoint_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CHECKPOINT_HEADER)
        for cp in self.checkpoints:
            w.writerow((f"{cp.elapsed:.6f}", cp.minsup, cp.intervals_emitted_total, cp.itemsets_certified_total))
        return buf.getvalue()


def post_process_probes(
    report: RunReport,
    by_support: Mapping[int, Iterable[Hashable]],
    closed: bool = True,
) -> list[ProbeRecord]:
    """Recompute each probe's minsup from the emissions made up to that probe.

    This is how a miner without checkpoints is credited: the reached level is
    the lowest support whose reference patterns were all emitted by then.
    ``by_support`` holds closed itemset masks (or (p, q) pairs when not closed).
    """
    out = []
    for probe in report.probes:
        emitted = [
            (e.q if closed else (e.p, e.q)) for e in report.emissions if e.elapsed <= probe.probe_time
        ]
        out.append(
            ProbeRecord(probe.probe_time, reached_minsup(emitted, by_support), probe.checkpoints_so_far, len(emitted))
        )
    return out


def run_with_probes(
    db: TransactionDatabase,
    miner: str,
    probe_interval: float,
    budget: Optional[float] = None,
    stop_at_support: Optional[int] = None,
    *,
    baseline_minsup: int = 1,
    dataset_id: str = "",
    control: Optional[MinerControl] = None,
    sink: Optional[Sink] = None,
    record_emissions: bool = False,
    grace: float = 5.0,
    on_wake: Optional[Callable[[], None]] = None,
    wake_interval: float = 0.05,
) -> RunReport:
    """Run ``miner`` ("all", "closed" or "baseline") and sample probes.

    ``sink`` receives every miner event on the miner thread. ``on_wake`` is
    called on the calling thread at least every ``wake_interval`` seconds and
    once more after the miner finishes, e.g. to flush output produced by the
    sink. Terminal status is one of exhausted, floor, interrupted, budget.
    """
    if probe_interval <= 0:
        raise ValueError("probe_interval must be positive")
    if miner not in MINERS:
        raise ValueError(f"unknown miner {miner!r}; expected one of {MINERS}")
    control = control or MinerControl()
    report = RunReport(dataset_id=dataset_id, miner=miner)
    done = threading.Event()
    outcome: dict[str, object] = {}
    t0 = time.perf_counter()

    def observe(event) -> None:
        if isinstance(event, CheckpointIssued):
            cp = event.checkpoint
            # re-stamp on the runner's clock so probes and checkpoints compare directly
            report.checkpoints.append(
                Checkpoint(
                    cp.minsup,
                    cp.kind,
                    cp.intervals_emitted_total,
                    cp.itemsets_certified_total,
                    time.perf_counter() - t0,
                    cp.index,
                )
            )
        elif record_emissions and isinstance(event, (IntervalEmitted, ClosedItemsetEmitted)):
            iv = event.interval
            report.emissions.append(TimedEmission(time.perf_counter() - t0, iv.support, iv.p, iv.q))
        if sink is not None:
            sink(event)

    def work() -> None:
        try:
            if miner == "all":
                outcome["terminal"] = mine_all(db, observe, control, stop_at_support)
            elif miner == "closed":
                outcome["terminal"] = mine_closed(db, observe, control, stop_at_support)
            else:
                outcome["terminal"] = baseline_mine(db, observe, control, baseline_minsup)
        except BaseException as exc:  # re-raised on the runner thread
            outcome["error"] = exc
        finally:
            done.set()

    def probe(now: float) -> None:
        stats = control.stats
        report.probes.append(
            ProbeRecord(
                probe_time=now,
                minsup_reached=report.checkpoints[-1].minsup if report.checkpoints else None,
                checkpoints_so_far=len(report.checkpoints),
                intervals_or_patterns_so_far=stats.emitted,
            )
        )

    worker = threading.Thread(target=work, name=f"miner-{miner}", daemon=True)
    budget_hit = False
    abort_at = None
    next_probe = probe_interval
    worker.start()
    while True:
        now = time.perf_counter() - t0
        if budget is not None and not budget_hit and now >= budget:
            budget_hit = True
            control.request_interrupt()
            abort_at = now + grace
        if abort_at is not None and now >= abort_at:
            control.request_abort()
            abort_at = None
        if now >= next_probe:
            probe(now)
            next_probe = (int(now / probe_interval) + 1) * probe_interval
            continue
        wake = next_probe
        if budget is not None and not budget_hit:
            wake = min(wake, budget)
        if abort_at is not None:
            wake = min(wake, abort_at)
        if on_wake is not None:
            on_wake()
            wake = min(wake, now + wake_interval)
        timeout = None if wake == float("inf") else max(0.0, wake - now)
        if done.wait(timeout):
            break

    worker.join()
    report.elapsed = time.perf_counter() - t0
    if "error" in outcome:
        raise outcome["error"]  # type: ignore[misc]
    probe(report.elapsed)
    if on_wake is not None:
        on_wake()
    terminal: Terminal = outcome["terminal"]  # type: ignore[assignment]
    status = status_of(terminal)
    if isinstance(terminal, Interrupted):
        report.mid_bin = terminal.mid_bin
        if budget_hit:
            status = "budget"
    report.status = status
    return report
