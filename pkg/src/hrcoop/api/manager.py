"""Session lifecycle and the event fan-out behind the HTTP surface.

Every session is single-writer: the lock serializes script replay, API
injections and the realtime ticker.  Subscribers receive every event record
in order through bounded queues; a subscriber that stops draining gets
disconnected rather than stalling the session.
"""

from __future__ import annotations

import queue
import threading
import time
import uuid
from pathlib import Path

from ..gestures import InertialSample, load_model_set
from ..session import CooperationSession, SessionError, load_scenario
from ..session.orchestrator import PLAN_DELAY_US

SUBSCRIBER_BUFFER = 10_000
_CLOSE = object()


class ManagedSession:
    def __init__(
        self,
        scenario_ref: str | dict,
        models_dir: str | None,
        clock: str,
        time_scale: float,
        run_script: bool,
        trace_dir: Path | None,
    ):
        self.id = uuid.uuid4().hex[:12]
        scenario = load_scenario(scenario_ref, models_dir=models_dir)
        models = None
        if scenario.models_dir is not None:
            models = load_model_set(scenario.models_dir)
        self.trace_path = (
            trace_dir / f"{scenario.name}-{self.id}.ndjson" if trace_dir else None
        )
        self.session = CooperationSession(
            scenario, models=models, trace_path=self.trace_path
        )
        self.clock_mode = clock
        self.time_scale = time_scale
        self.lock = threading.RLock()
        self._subscribers: list[queue.Queue] = []
        self.session.subscribers = [self._fan_out]
        self._finalized = False
        self._ticker: threading.Thread | None = None
        self._stop = threading.Event()
        if run_script:
            self.session.attach_script()
        if clock == "realtime":
            self._ticker = threading.Thread(target=self._run_clock, daemon=True)
            self._ticker.start()

    # ------------------------------------------------------------- event flow

    def _fan_out(self, record: dict) -> None:
        for q in list(self._subscribers):
            try:
                q.put_nowait(record)
            except queue.Full:
                # Slow consumer: drop the whole subscription, not events.
                self._subscribers.remove(q)
                q.put(_CLOSE)

    def subscribe(self, from_version: int = 0) -> queue.Queue:
        q: queue.Queue = queue.Queue(maxsize=SUBSCRIBER_BUFFER)
        with self.lock:
            for record in self.session.events:
                if record["v"] > from_version:
                    q.put(record)
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self.lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    # ------------------------------------------------------------- lifecycle

    def _run_clock(self) -> None:
        wall_step = 0.02
        while not self._stop.is_set():
            time.sleep(wall_step)
            with self.lock:
                if self.session.terminal():
                    self._finalize_locked()
                    return
                target = self.session.clock_us + int(wall_step * self.time_scale * 1e6)
                self.session.pump(target)
                if self.session.terminal():
                    self._finalize_locked()
                    return

    def _finalize_locked(self) -> None:
        if not self._finalized and self.session.terminal():
            self.session.finalize()
            self._finalized = True
            for q in list(self._subscribers):
                q.put(_CLOSE)

    def close(self) -> None:
        self._stop.set()
        with self.lock:
            if self.session.terminal():
                self._finalize_locked()

    # ------------------------------------------------------------- operations

    def advance(self, to_seconds: float) -> None:
        with self.lock:
            target = int(round(to_seconds * 1e6))
            if target < self.session.clock_us:
                raise ValueError(
                    f"cannot rewind the clock to {to_seconds:.3f}s"
                )
            self.session.pump(target)
            self._finalize_locked()

    def inject_action(self, action: str, at: float | None) -> float:
        with self.lock:
            if self.session.terminal():
                raise SessionError(f"session is {self.session.mode}")
            t_us = (
                int(round(at * 1e6))
                if at is not None
                else self.session.clock_us + PLAN_DELAY_US
            )
            if t_us < self.session.clock_us:
                raise ValueError(f"action time {at} is in the session's past")
            self.session.pump(t_us)
            if self.session.terminal():
                self._finalize_locked()
                raise SessionError(f"session is {self.session.mode}")
            t = t_us / 1e6
            self.session.clock_us = t_us
            # Same record shape as a scripted token: the transport must not
            # leave marks in the trace.
            self.session.handle_gesture(action, t, source="token")
            self.session.pump(t_us + PLAN_DELAY_US)
            self._finalize_locked()
            return t

    def inject_samples(self, samples: list[InertialSample]) -> float:
        with self.lock:
            if self.session.terminal():
                raise SessionError(f"session is {self.session.mode}")
            if not samples:
                raise ValueError("empty sample batch")
            last_us = int(round(max(s.t for s in samples) * 1e6))
            if last_us < self.session.clock_us:
                raise ValueError("samples lie in the session's past")
            self.session.inject_samples(samples)
            self.session.pump(last_us + PLAN_DELAY_US)
            self._finalize_locked()
            return last_us / 1e6

    def run_to_completion(self, limit_seconds: float | None = None) -> None:
        with self.lock:
            limit = limit_seconds or self.session.scenario.max_sim_time
            self.session.pump(int(limit * 1e6))
            self._finalize_locked()

    def info(self) -> dict:
        with self.lock:
            s = self.session
            suggestion = None
            if s.suggestion is not None:
                suggestion = {
                    "node": s.suggestion.node_id,
                    "path": s.suggestion.path_id,
                    "cost": s.suggestion.path_cost,
                }
            return {
                "id": self.id,
                "scenario": s.scenario.name,
                "mode": s.mode,
                "mode_reason": s.mode_reason,
                "clock": self.clock_mode,
                "t": s.clock_us / 1e6,
                "version": s.events[-1]["v"] if s.events else 0,
                "current_path": s.current_path_id,
                "suggestion": suggestion,
                "trace_path": str(self.trace_path) if self.trace_path else None,
            }


class SessionManager:
    def __init__(self, trace_dir: str | Path | None = None, models_dir: str | None = None):
        self.sessions: dict[str, ManagedSession] = {}
        self.order: list[str] = []
        self.trace_dir = Path(trace_dir) if trace_dir else None
        self.default_models_dir = models_dir
        self._lock = threading.Lock()

    def create(
        self,
        scenario: str | dict,
        models_dir: str | None = None,
        clock: str = "manual",
        time_scale: float = 5.0,
        run_script: bool = False,
        trace: bool = True,
    ) -> ManagedSession:
        managed = ManagedSession(
            scenario_ref=scenario,
            models_dir=models_dir or self.default_models_dir,
            clock=clock,
            time_scale=time_scale,
            run_script=run_script,
            trace_dir=self.trace_dir if trace else None,
        )
        with self._lock:
            self.sessions[managed.id] = managed
            self.order.append(managed.id)
        return managed

    def get(self, session_id: str) -> ManagedSession | None:
        return self.sessions.get(session_id)

    def latest(self) -> ManagedSession | None:
        with self._lock:
            return self.sessions[self.order[-1]] if self.order else None

    def close_all(self) -> None:
        for managed in self.sessions.values():
            managed.close()
