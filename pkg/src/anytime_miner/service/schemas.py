from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..closure import DEFAULT_EXPAND_BUDGET

RunStatus = Literal["running", "exhausted", "floor", "interrupted", "budget", "error"]


class RunRequest(BaseModel):
    dataset: str = Field(description="FIMI text: one transaction per line")
    mode: Literal["all", "closed", "baseline"] = "closed"
    stop_at_support: Optional[int] = Field(default=None, ge=1)
    budget_seconds: Optional[float] = Field(default=None, ge=0)
    probe_seconds: Optional[float] = Field(default=None, gt=0)
    grace_seconds: float = Field(default=5.0, ge=0)
    baseline_minsup: Optional[int] = Field(default=None, ge=1)
    expand: bool = False
    expand_budget: int = Field(default=DEFAULT_EXPAND_BUDGET, ge=1)
    dataset_id: Optional[str] = None

    @model_validator(mode="after")
    def _check_mode_options(self) -> "RunRequest":
        if self.expand and self.mode != "all":
            raise ValueError("expand is only valid with mode 'all'")
        if self.mode == "baseline" and self.baseline_minsup is None:
            raise ValueError("mode 'baseline' requires baseline_minsup")
        if self.mode != "baseline" and self.baseline_minsup is not None:
            raise ValueError("baseline_minsup is only valid with mode 'baseline'")
        return self


class CheckpointModel(BaseModel):
    minsup: int
    kind: str
    intervals_emitted_total: int
    itemsets_certified_total: int
    elapsed_seconds: float


class ProbeModel(BaseModel):
    probe_seconds: float
    minsup_reached: Optional[int]
    checkpoints: int
    patterns: int


class EventModel(BaseModel):
    seq: int
    type: Literal["interval", "itemset", "checkpoint", "end"]
    line: str
    support: Optional[int] = None
    min_itemset: Optional[list[int]] = None
    max_itemset: Optional[list[int]] = None
    minsup: Optional[int] = None
    elapsed_seconds: Optional[float] = None
    status: Optional[str] = None


class RunInfo(BaseModel):
    id: str
    mode: str
    status: RunStatus
    dataset_id: Optional[str] = None
    n_items: int
    n_transactions: int
    emitted: int
    last_certified_minsup: Optional[int]
    checkpoints: list[CheckpointModel]
    probes: list[ProbeModel]
    elapsed_seconds: Optional[float] = None
    mid_bin: bool = False
    error: Optional[str] = None


class EventsPage(BaseModel):
    events: list[EventModel]
    next_after: int
    done: bool


class InterruptRequest(BaseModel):
    hard: bool = False
