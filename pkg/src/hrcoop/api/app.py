"""HTTP and WebSocket surface of the cooperation service.

JSON request/response bodies throughout; the event stream is a WebSocket
pushing one JSON text frame per event record, resumable from any version.
"""

from __future__ import annotations

import queue
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..gestures import InertialSample
from ..session import SessionError
from .manager import _CLOSE, ManagedSession, SessionManager
from .schemas import (
    AcceptedResponse,
    ActionRequest,
    AdvanceRequest,
    CreateSessionRequest,
    EventsPage,
    GraphResponse,
    PathsResponse,
    SessionInfo,
    StreamRequest,
    SuggestionResponse,
)


def create_app(
    trace_dir: str | Path | None = None,
    models_dir: str | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="hrcoop cooperation service", version="0.1.0")
    manager = SessionManager(trace_dir=trace_dir, models_dir=models_dir)
    app.state.manager = manager

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def resolve(session_id: str | None) -> ManagedSession:
        managed = manager.get(session_id) if session_id else manager.latest()
        if managed is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return managed

    @app.post("/session", response_model=SessionInfo)
    def create_session(body: CreateSessionRequest):
        try:
            managed = manager.create(
                scenario=body.scenario,
                models_dir=body.models_dir,
                clock=body.clock,
                time_scale=body.time_scale,
                run_script=body.run_script,
                trace=body.trace,
            )
        except Exception as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return SessionInfo(**managed.info())

    @app.get("/session/{session_id}", response_model=SessionInfo)
    def session_info(session_id: str):
        return SessionInfo(**resolve(session_id).info())

    @app.get("/graph", response_model=GraphResponse)
    def graph_snapshot(session: str | None = Query(None)):
        managed = resolve(session)
        with managed.lock:
            return GraphResponse(
                version=managed.info()["version"],
                graph=managed.session.graph.snapshot(),
            )

    @app.get("/paths", response_model=PathsResponse)
    def paths(session: str | None = Query(None)):
        managed = resolve(session)
        with managed.lock:
            s = managed.session
            return PathsResponse(
                version=managed.info()["version"],
                paths=[
                    {**p.to_dict(), "abandoned": p.abandoned(s.graph)}
                    for p in s.paths
                ],
            )

    @app.get("/suggestion", response_model=SuggestionResponse)
    def suggestion(session: str | None = Query(None)):
        managed = resolve(session)
        with managed.lock:
            s = managed.session
            expected = []
            for arc in s.graph.active_arcs():
                if arc.ordered:
                    first = arc.first_unended()
                    if first is not None and first.agent.value == "human":
                        expected.append(
                            {"arc": arc.id, "action": first.id, "name": first.name}
                        )
                else:
                    for action in arc.actions:
                        if not action.ended and action.agent.value == "human":
                            expected.append(
                                {"arc": arc.id, "action": action.id, "name": action.name}
                            )
            return SuggestionResponse(
                version=managed.info()["version"],
                suggestion=managed.info()["suggestion"],
                expected_human_actions=expected,
            )

    @app.post("/session/{session_id}/action", response_model=AcceptedResponse)
    def inject_action(session_id: str, body: ActionRequest):
        managed = resolve(session_id)
        try:
            t = managed.inject_action(body.action, body.at)
        except SessionError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        info = managed.info()
        return AcceptedResponse(t=t, version=info["version"], mode=info["mode"])

    @app.post("/session/{session_id}/stream", response_model=AcceptedResponse)
    def inject_stream(session_id: str, body: StreamRequest):
        managed = resolve(session_id)
        samples = [InertialSample(t=s.t, acc=tuple(s.acc)) for s in body.samples]
        try:
            t = managed.inject_samples(samples)
        except SessionError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        info = managed.info()
        return AcceptedResponse(t=t, version=info["version"], mode=info["mode"])

    @app.post("/session/{session_id}/advance", response_model=AcceptedResponse)
    def advance(session_id: str, body: AdvanceRequest):
        managed = resolve(session_id)
        try:
            managed.advance(body.to)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        info = managed.info()
        return AcceptedResponse(t=info["t"], version=info["version"], mode=info["mode"])

    @app.get("/session/{session_id}/events/page", response_model=EventsPage)
    def events_page(session_id: str, after: int = Query(0), limit: int = Query(1000)):
        managed = resolve(session_id)
        with managed.lock:
            selected = [r for r in managed.session.events if r["v"] > after][:limit]
            version = managed.session.events[-1]["v"] if managed.session.events else 0
        return EventsPage(version=version, events=selected)

    @app.get("/session/{session_id}/trace")
    def download_trace(session_id: str):
        managed = resolve(session_id)
        if managed.trace_path is None or not Path(managed.trace_path).exists():
            raise HTTPException(status_code=404, detail="session has no trace file")
        return FileResponse(managed.trace_path, media_type="application/x-ndjson")

    @app.websocket("/session/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str):
        managed = manager.get(session_id)
        if managed is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        try:
            from_version = int(websocket.query_params.get("from", 0))
        except ValueError:
            from_version = 0
        q = managed.subscribe(from_version)
        import asyncio

        def poll():
            try:
                return q.get(timeout=0.5)
            except queue.Empty:
                return None

        try:
            while True:
                record = await asyncio.get_event_loop().run_in_executor(None, poll)
                if record is _CLOSE:
                    break
                if record is None:
                    continue
                await websocket.send_json(record)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            managed.unsubscribe(q)
            try:
                await websocket.close()
            except RuntimeError:
                pass

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
