"""Command line front end.

Exit codes: 0 when a run finishes or is stopped after a checkpoint, 1 on
unreadable input and refused expansions, 2 on usage errors, 3 when a run was
interrupted before any checkpoint was certified.
"""

from __future__ import annotations

import argparse
import queue
import signal
import sys
from typing import IO, Optional, Sequence

from . import formatting as fmt
from .closure import DEFAULT_EXPAND_BUDGET, ExpansionTooLarge
from .datamodel import ParseError, TransactionDatabase, parse_fimi
from .events import CheckpointIssued, ClosedItemsetEmitted, IntervalEmitted, MinerControl
from .oracle import OracleBudgetExceeded, enumerate_all
from .runner import run_with_probes

MODES = ("all", "closed", "baseline", "oracle", "bench")
NEVER = float("inf")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anytime-miner",
        description="Mine frequent or closed itemsets in decreasing support order with certified checkpoints.",
    )
    ap.add_argument("--input", required=True, help="FIMI transaction file, or - for stdin")
    ap.add_argument("--mode", choices=MODES, default="all")
    ap.add_argument("--stop-at-support", type=int, metavar="N", help="do not descend below this support")
    ap.add_argument("--budget-seconds", type=float, metavar="S", help="request interrupt after S seconds")
    ap.add_argument("--probe-seconds", type=float, metavar="S", help="probe interval for reports")
    ap.add_argument("--grace-seconds", type=float, default=5.0, metavar="S",
                    help="after the budget, wait this long for a bin boundary before aborting mid-bin")
    ap.add_argument("--expand", action="store_true", help="print every itemset instead of intervals (mode=all)")
    ap.add_argument("--expand-budget", type=int, default=DEFAULT_EXPAND_BUDGET, metavar="N")
    ap.add_argument("--baseline-minsup", type=int, metavar="N", help="fixed minsup for mode=baseline")
    ap.add_argument("--miner", choices=("all", "closed", "baseline"), default="closed",
                    help="miner benchmarked by mode=bench")
    ap.add_argument("--output", default="-", help="pattern stream (or report CSV for bench); - for stdout")
    ap.add_argument("--report-csv", metavar="PATH", help="write the probe report CSV here")
    ap.add_argument("--checkpoint-csv", metavar="PATH", help="write the checkpoint log CSV here")
    ap.add_argument("--dataset-id", default=None)
    ap.add_argument("--server", metavar="URL", help="submit the run to a mining service instead of running locally")
    return ap


def validate(args: argparse.Namespace) -> None:
    if args.expand and args.mode != "all":
        raise UsageError("--expand is only valid with --mode all")
    if args.mode == "baseline" and args.baseline_minsup is None:
        raise UsageError("--mode baseline requires --baseline-minsup")
    if args.mode != "baseline" and args.baseline_minsup is not None and not (
        args.mode == "bench" and args.miner == "baseline"
    ):
        raise UsageError("--baseline-minsup is only valid with --mode baseline")
    if args.baseline_minsup is not None and args.baseline_minsup < 1:
        raise UsageError("--baseline-minsup must be at least 1")
    if args.stop_at_support is not None and args.stop_at_support < 1:
        raise UsageError("--stop-at-support must be at least 1")
    if args.probe_seconds is not None and args.probe_seconds <= 0:
        raise UsageError("--probe-seconds must be positive")
    if args.budget_seconds is not None and args.budget_seconds < 0:
        raise UsageError("--budget-seconds must not be negative")
    if args.mode == "bench" and args.probe_seconds is None:
        raise UsageError("--mode bench requires --probe-seconds")
    if args.expand_budget < 1:
        raise UsageError("--expand-budget must be positive")


def read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def open_output(path: str) -> IO[str]:
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def write_file(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_oracle(db: TransactionDatabase, out: IO[str]) -> int:
    ref = enumerate_all(db)
    closed = ref.closed
    rows = sorted(
        ((s, db.order.external(x), x in closed) for x, s in ref.support.items()),
        key=lambda row: (-row[0], len(row[1]), row[1]),
    )
    for s, items, is_closed in rows:
        out.write(fmt.itemset_line(s, items, is_closed) + "\n")
    return 0


class _Interrupts:
    """First SIGINT requests an interrupt at the next bin boundary, the second aborts."""

    def __init__(self, control: MinerControl):
        self.control = control
        self.count = 0
        self.previous = None

    def __enter__(self):
        try:
            self.previous = signal.signal(signal.SIGINT, self.handle)
        except ValueError:  # not on the main thread
            self.previous = None
        return self

    def handle(self, signum, frame) -> None:
        self.count += 1
        if self.count == 1:
            self.control.request_interrupt()
        else:
            self.control.request_abort()

    def __exit__(self, *exc) -> None:
        if self.previous is not None:
            signal.signal(signal.SIGINT, self.previous)


def run_local(args: argparse.Namespace, db: TransactionDatabase, out: IO[str]) -> int:
    order = db.order
    lines: "queue.SimpleQueue[str]" = queue.SimpleQueue()
    control = MinerControl()
    expand_error: list[ExpansionTooLarge] = []
    miner = args.miner if args.mode == "bench" else args.mode
    stream = args.mode != "bench"

    def sink(event) -> None:
        if isinstance(event, IntervalEmitted):
            iv = event.interval
            if args.expand:
                if iv.size > args.expand_budget:
                    expand_error.append(ExpansionTooLarge(iv.size, args.expand_budget))
                    control.request_abort()
                    return
                for line in fmt.expanded_lines(order, iv):
                    lines.put(line)
            else:
                lines.put(fmt.interval_line(order, iv.support, iv.p, iv.q))
        elif isinstance(event, ClosedItemsetEmitted):
            lines.put(fmt.itemset_line(event.support, order.external(event.itemset)))
        elif isinstance(event, CheckpointIssued):
            cp = event.checkpoint
            lines.put(fmt.checkpoint_line(cp.minsup, cp.elapsed))

    def drain() -> None:
        while True:
            try:
                line = lines.get_nowait()
            except queue.Empty:
                return
            if stream:
                out.write(line + "\n")

    with _Interrupts(control):
        report = run_with_probes(
            db,
            miner,
            probe_interval=args.probe_seconds or NEVER,
            budget=args.budget_seconds,
            stop_at_support=args.stop_at_support,
            baseline_minsup=args.baseline_minsup or 1,
            dataset_id=args.dataset_id or args.input,
            control=control,
            sink=sink,
            grace=args.grace_seconds,
            on_wake=drain,
        )
    drain()

    if expand_error:
        out.flush()
        print(f"error: {expand_error[0]}; refusing to expand", file=sys.stderr)
        return 1
    if stream:
        out.write(fmt.end_line(report.status, report.last_certified_minsup, report.mid_bin) + "\n")
    else:
        out.write(report.report_csv())
    if args.report_csv:
        write_file(args.report_csv, report.report_csv())
    if args.checkpoint_csv:
        write_file(args.checkpoint_csv, report.checkpoint_csv())
    if not stream:
        certified = report.last_certified_minsup
        print(
            f"{report.status}: last certified minsup "
            f"{'none' if certified is None else certified} after {report.elapsed:.3f}s",
            file=sys.stderr,
        )
    return exit_code(report.status, report.last_certified_minsup, miner)


def exit_code(status: str, last_minsup: Optional[int], miner: str) -> int:
    if status in ("interrupted", "budget") and last_minsup is None and miner != "baseline":
        return 3
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        validate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2

    try:
        data = read_input(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    try:
        raw = parse_fimi(data)
    except ParseError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 1

    if args.server:
        from .client import run_remote

        return run_remote(args, data)

    db = TransactionDatabase.from_raw(raw)
    try:
        out = open_output(args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    try:
        if args.mode == "oracle":
            try:
                return run_oracle(db, out)
            except OracleBudgetExceeded as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
        return run_local(args, db, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if out is not sys.stdout:
            out.close()
        else:
            out.flush()


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
