"""Request/response bodies of the cooperation service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    scenario: str | dict = Field(
        description="Bundled scenario name (e.g. scenario_blue.json), a path, "
        "or an inline scenario document"
    )
    models_dir: str | None = None
    clock: Literal["manual", "realtime"] = "manual"
    time_scale: float = Field(5.0, gt=0, description="sim seconds per wall second")
    run_script: bool = Field(
        False, description="replay the scenario's own script (scripted run)"
    )
    trace: bool = Field(True, description="persist the session trace to disk")


class SessionInfo(BaseModel):
    id: str
    scenario: str
    mode: str
    mode_reason: str = ""
    clock: str
    t: float
    version: int
    current_path: int | None = None
    suggestion: dict | None = None
    trace_path: str | None = None


class ActionRequest(BaseModel):
    action: str
    at: float | None = Field(
        None, description="simulated time of the action; defaults to now"
    )


class SampleRecord(BaseModel):
    t: float
    acc: tuple[float, float, float]


class StreamRequest(BaseModel):
    samples: list[SampleRecord]


class AdvanceRequest(BaseModel):
    to: float = Field(gt=0, description="advance the simulated clock to this time")


class AcceptedResponse(BaseModel):
    accepted: bool = True
    t: float
    version: int
    mode: str


class GraphResponse(BaseModel):
    version: int
    graph: dict


class PathsResponse(BaseModel):
    version: int
    paths: list[dict]


class SuggestionResponse(BaseModel):
    version: int
    suggestion: dict | None
    expected_human_actions: list[dict]


class ErrorResponse(BaseModel):
    detail: str


class EventsPage(BaseModel):
    version: int
    events: list[dict[str, Any]]
