"""Thin HTTP client used by ``anytime-miner --server URL``.

The service formats every line, so a remote run prints exactly what a local
run with the same flags would.
"""

from __future__ import annotations

import argparse
import signal
import sys
from typing import Optional

import httpx

from .cli import exit_code, open_output, write_file


def submit_payload(args: argparse.Namespace, data: bytes) -> dict:
    mode = args.miner if args.mode == "bench" else args.mode
    payload = {
        "dataset": data.decode("ascii", errors="replace"),
        "mode": mode,
        "stop_at_support": args.stop_at_support,
        "budget_seconds": args.budget_seconds,
        "probe_seconds": args.probe_seconds,
        "grace_seconds": args.grace_seconds,
        "expand": args.expand,
        "expand_budget": args.expand_budget,
        "dataset_id": args.dataset_id or args.input,
    }
    if mode == "baseline":
        payload["baseline_minsup"] = args.baseline_minsup or 1
    return payload


def run_remote(args: argparse.Namespace, data: bytes, client: Optional[httpx.Client] = None) -> int:
    if args.mode == "oracle":
        print("error: --mode oracle runs locally only; drop --server", file=sys.stderr)
        return 2
    own = client is None
    if own:
        client = httpx.Client(base_url=args.server, timeout=60.0)
    try:
        return _run(args, data, client)
    except httpx.HTTPError as exc:
        print(f"error: server {args.server}: {exc}", file=sys.stderr)
        return 1
    finally:
        if own:
            client.close()


def _run(args: argparse.Namespace, data: bytes, client: httpx.Client) -> int:
    resp = client.post("/runs", json=submit_payload(args, data))
    if resp.status_code == 422:
        print(f"error: {args.input}: {resp.json().get('detail')}", file=sys.stderr)
        return 1
    resp.raise_for_status()
    run_id = resp.json()["id"]

    interrupts = {"count": 0}

    def handle(signum, frame):
        interrupts["count"] += 1
        client.post(f"/runs/{run_id}/interrupt", json={"hard": interrupts["count"] > 1})

    try:
        previous = signal.signal(signal.SIGINT, handle)
    except ValueError:
        previous = None

    stream = args.mode != "bench"
    out = open_output(args.output)
    try:
        after = 0
        while True:
            page = client.get(f"/runs/{run_id}/events", params={"after": after, "wait": 1.0}).json()
            for event in page["events"]:
                if stream:
                    out.write(event["line"] + "\n")
            after = page["next_after"]
            if page["done"]:
                break
        info = client.get(f"/runs/{run_id}").json()
        if info["status"] == "error":
            out.flush()
            print(f"error: {info['error']}", file=sys.stderr)
            return 1
        report = client.get(f"/runs/{run_id}/report.csv").text
        if not stream:
            out.write(report)
        if args.report_csv:
            write_file(args.report_csv, report)
        if args.checkpoint_csv:
            write_file(args.checkpoint_csv, client.get(f"/runs/{run_id}/checkpoints.csv").text)
        miner = args.miner if args.mode == "bench" else args.mode
        return exit_code(info["status"], info["last_certified_minsup"], miner)
    finally:
        if previous is not None:
            signal.signal(signal.SIGINT, previous)
        if out is not sys.stdout:
            out.close()
        else:
            out.flush()
