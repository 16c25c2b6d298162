from __future__ import annotations

from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse

from ..datamodel import ParseError
from .jobs import Job, JobManager
from .schemas import EventsPage, InterruptRequest, RunInfo, RunRequest


def create_app(manager: Optional[JobManager] = None) -> FastAPI:
    jobs = manager or JobManager()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        jobs.shutdown()

    app = FastAPI(title="anytime-miner", version="0.1.0", lifespan=lifespan)
    app.state.jobs = jobs

    def lookup(run_id: str) -> Job:
        job = jobs.get(run_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no run {run_id}")
        return job

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/runs", response_model=RunInfo, status_code=201)
    def submit(request: RunRequest):
        try:
            job = jobs.submit(request)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return job.info()

    @app.get("/runs", response_model=list[RunInfo])
    def list_runs():
        return [job.info() for job in jobs.list()]

    @app.get("/runs/{run_id}", response_model=RunInfo)
    def get_run(run_id: str):
        return lookup(run_id).info()

    @app.get("/runs/{run_id}/events", response_model=EventsPage)
    def get_events(run_id: str, after: int = Query(0, ge=0), limit: int = Query(1000, ge=1, le=100_000),
                   wait: float = Query(0.0, ge=0, le=30)):
        job = lookup(run_id)
        if wait and len(job.events) <= after:
            job.done.wait(wait)
        # read done before slicing so a finished run never hides trailing events
        finished = job.done.is_set()
        events = job.events_after(after, limit)
        next_after = after + len(events)
        return EventsPage(events=events, next_after=next_after, done=finished and next_after >= len(job.events))

    @app.post("/runs/{run_id}/interrupt", response_model=RunInfo)
    def interrupt(run_id: str, body: Optional[InterruptRequest] = None):
        job = lookup(run_id)
        if body is not None and body.hard:
            job.control.request_abort()
        else:
            job.control.request_interrupt()
        return job.info()

    @app.delete("/runs/{run_id}", status_code=204)
    def delete_run(run_id: str):
        if jobs.remove(run_id) is None:
            raise HTTPException(status_code=404, detail=f"no run {run_id}")

    @app.get("/runs/{run_id}/report.csv", response_class=PlainTextResponse)
    def report_csv(run_id: str):
        job = lookup(run_id)
        if job.report is None:
            raise HTTPException(status_code=409, detail="run has not finished")
        return PlainTextResponse(job.report.report_csv(), media_type="text/csv")

    @app.get("/runs/{run_id}/checkpoints.csv", response_class=PlainTextResponse)
    def checkpoints_csv(run_id: str):
        job = lookup(run_id)
        if job.report is None:
            raise HTTPException(status_code=409, detail="run has not finished")
        return PlainTextResponse(job.report.checkpoint_csv(), media_type="text/csv")

    return app


app = create_app()
