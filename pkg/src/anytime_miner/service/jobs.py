"""Background mining jobs: one runner thread per job, events kept in memory."""

from __future__ import annotations

import threading
import uuid
from typing import Optional

from .. import formatting as fmt
from ..closure import ExpansionTooLarge, iter_expand
from ..datamodel import TransactionDatabase, parse_fimi
from ..events import CheckpointIssued, ClosedItemsetEmitted, IntervalEmitted, MinerControl
from ..runner import RunReport, run_with_probes
from .schemas import CheckpointModel, EventModel, ProbeModel, RunInfo, RunRequest

NEVER = float("inf")


class Job:
    def __init__(self, request: RunRequest, db: TransactionDatabase):
        self.id = uuid.uuid4().hex
        self.request = request
        self.db = db
        self.control = MinerControl()
        self.events: list[EventModel] = []
        self.report: Optional[RunReport] = None
        self.error: Optional[str] = None
        self.done = threading.Event()
        self._checkpoints: list[CheckpointModel] = []
        self._thread = threading.Thread(target=self._run, name=f"job-{self.id[:8]}", daemon=True)

    def start(self) -> None:
        self._thread.start()

    def _push(self, **fields) -> None:
        self.events.append(EventModel(seq=len(self.events), **fields))

    def _on_event(self, event) -> None:
        order = self.db.order
        if isinstance(event, IntervalEmitted):
            iv = event.interval
            if self.request.expand:
                if iv.size > self.request.expand_budget:
                    self.error = str(ExpansionTooLarge(iv.size, self.request.expand_budget))
                    self.control.request_abort()
                    return
                for x in iter_expand(iv):
                    items = order.external(x)
                    self._push(type="itemset", line=fmt.itemset_line(iv.support, items), support=iv.support,
                               max_itemset=list(items))
            else:
                self._push(
                    type="interval",
                    line=fmt.interval_line(order, iv.support, iv.p, iv.q),
                    support=iv.support,
                    min_itemset=list(order.external(iv.min_itemset)),
                    max_itemset=list(order.external(iv.max_itemset)),
                )
        elif isinstance(event, ClosedItemsetEmitted):
            items = order.external(event.itemset)
            self._push(type="itemset", line=fmt.itemset_line(event.support, items), support=event.support,
                       max_itemset=list(items))
        elif isinstance(event, CheckpointIssued):
            cp = event.checkpoint
            self._checkpoints.append(
                CheckpointModel(
                    minsup=cp.minsup,
                    kind=cp.kind.value,
                    intervals_emitted_total=cp.intervals_emitted_total,
                    itemsets_certified_total=cp.itemsets_certified_total,
                    elapsed_seconds=cp.elapsed,
                )
            )
            self._push(type="checkpoint", line=fmt.checkpoint_line(cp.minsup, cp.elapsed), minsup=cp.minsup,
                       elapsed_seconds=cp.elapsed)

    def _run(self) -> None:
        req = self.request
        try:
            self.report = run_with_probes(
                self.db,
                req.mode,
                probe_interval=req.probe_seconds or NEVER,
                budget=req.budget_seconds,
                stop_at_support=req.stop_at_support,
                baseline_minsup=req.baseline_minsup or 1,
                dataset_id=req.dataset_id or self.id,
                control=self.control,
                sink=self._on_event,
                grace=req.grace_seconds,
            )
            if self.error is None:
                r = self.report
                self._push(type="end", line=fmt.end_line(r.status, r.last_certified_minsup, r.mid_bin),
                           status=r.status, minsup=r.last_certified_minsup)
        except Exception as exc:  # surfaced through RunInfo.error
            self.error = f"{type(exc).__name__}: {exc}"
        finally:
            self.done.set()

    @property
    def status(self) -> str:
        if not self.done.is_set():
            return "running"
        if self.error is not None:
            return "error"
        return self.report.status

    def info(self) -> RunInfo:
        stats = self.control.stats
        report = self.report if self.done.is_set() else None
        probes = []
        if report is not None:
            probes = [
                ProbeModel(
                    probe_seconds=p.probe_time,
                    minsup_reached=p.minsup_reached,
                    checkpoints=p.checkpoints_so_far,
                    patterns=p.intervals_or_patterns_so_far,
                )
                for p in report.probes
            ]
        checkpoints = list(self._checkpoints)
        return RunInfo(
            id=self.id,
            mode=self.request.mode,
            status=self.status,
            dataset_id=self.request.dataset_id,
            n_items=self.db.n,
            n_transactions=self.db.m,
            emitted=stats.emitted,
            last_certified_minsup=checkpoints[-1].minsup if checkpoints else None,
            checkpoints=checkpoints,
            probes=probes,
            elapsed_seconds=report.elapsed if report else stats.elapsed,
            mid_bin=report.mid_bin if report else False,
            error=self.error,
        )

    def events_after(self, after: int, limit: int) -> list[EventModel]:
        return self.events[after:after + limit]


class JobManager:
    def __init__(self) -> None:
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, request: RunRequest) -> Job:
        """Parse the dataset and start mining. Raises ParseError on bad input."""
        db = TransactionDatabase.from_raw(parse_fimi(request.dataset))
        job = Job(request, db)
        with self._lock:
            self._jobs[job.id] = job
        job.start()
        return job

    def get(self, job_id: str) -> Optional[Job]:
        with self._lock:
            return self._jobs.get(job_id)

    def list(self) -> list[Job]:
        with self._lock:
            return list(self._jobs.values())

    def remove(self, job_id: str) -> Optional[Job]:
        with self._lock:
            job = self._jobs.pop(job_id, None)
        if job is not None:
            job.control.request_abort()
        return job

    def shutdown(self) -> None:
        for job in self.list():
            job.control.request_abort()
