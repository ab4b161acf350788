"""The cooperation session: one event loop fusing gestures, robot progress
and graph reasoning.

All state changes funnel through a single pump over an integer-microsecond
clock: control ticks at 100 Hz, inertial samples at 40 Hz, scripted or
injected human actions, and deferred planning passes one tick after each
state change (that tick is the accounted reasoning latency).  Every record is
appended to an event log, and optionally to a newline-delimited trace file,
with a strictly increasing version.
"""

from __future__ import annotations

import json
import heapq
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..andor import (
    Agent,
    AndOrGraph,
    CooperationFailedError,
    CooperationPath,
    DeadlockError,
    GraphSolved,
    Suggestion,
    generate_all_paths,
    next_suggested_node,
    register_action_ended,
)
from ..andor.graph import MAX_REPETITIONS, ActionSpec, HyperArc
from ..gestures import GestureModel, InertialSample, OnlineRecognizer, rest_samples, synthesize_gesture_stream
from .executor import CONTROL_DT, RobotExecutor, TickTelemetry
from .ledger import ActionStamp, SwitchStamp, TimingLedger
from .scenario import Scenario, ScenarioError
from .trace import TraceWriter

TICK_US = 10_000          # 100 Hz control
SAMPLE_US = 25_000        # 40 Hz inertial stream
PLAN_DELAY_US = 10_000    # one control tick of reasoning latency
ROBOT_STATE_DECIMATION = 5

PRIO_TICK, PRIO_SAMPLE, PRIO_SCRIPT, PRIO_PLAN = 0, 1, 2, 3

MODE_NORMAL, MODE_AMBIGUOUS, MODE_FAILED, MODE_SOLVED = (
    "normal",
    "ambiguous",
    "failed",
    "solved",
)


class SessionError(Exception):
    """Invalid interaction with a session (wrong mode, unknown reference)."""


@dataclass
class _PendingGesture:
    name: str
    t_rec: float
    t_start: float
    t_end: float
    deadline: float


class CooperationSession:
    """Single-writer cooperation state; drive it through ``pump``/handlers."""

    def __init__(
        self,
        scenario: Scenario,
        models: dict[str, GestureModel] | None = None,
        trace_path: str | Path | None = None,
    ):
        self.scenario = scenario
        self.graph: AndOrGraph = scenario.build_graph()
        self.paths: list[CooperationPath] = generate_all_paths(self.graph)
        self._tag_paths()
        self.world = scenario.build_world()
        self.executor = RobotExecutor(self.world)
        self.models = models or {}
        self.recognizer = OnlineRecognizer(self.models) if self.models else None
        self.ledger = TimingLedger()
        self.mode = MODE_NORMAL
        self.mode_reason = ""
        self.current_path_id: int | None = None
        self.suggestion: Suggestion | None = None
        self.expected_action: tuple[str, str] | None = None  # (arc id, action id)
        self.events: list[dict] = []
        self.trace = TraceWriter(trace_path) if trace_path else None

        self.clock_us = 0
        self._seq = 0
        self._queue: list[tuple[int, int, int, str, dict]] = []
        self._queue_seq = 0
        self._next_tick_us = TICK_US
        self._sample_provider: _SampleTimeline | None = None
        self._solved_queue: list[str] = []
        self._pending: list[_PendingGesture] = []
        self._pending_switches: list[SwitchStamp] = []
        self._stamps: dict[str, float] = {}
        self._last_suggestion_t = 0.0
        self._last_dispatch: tuple[str, str] | None = None
        self._dispatch_attempts: dict[str, int] = {}
        self._tick_count = 0
        self._moved_ticks = 0
        self.min_clearance: float | None = None
        self.max_joint_overrun = 0.0
        self.max_obstacle_activation = 0.0

        self._emit("meta", 0.0, scenario=scenario.name, seed=scenario.seed)
        self._emit_graph_snapshot(0.0)
        self._emit(
            "paths",
            0.0,
            paths=[p.to_dict() for p in self.paths],
        )
        self.schedule_plan(0)

    # ------------------------------------------------------------------ setup

    def _tag_paths(self) -> None:
        tags = self.scenario.graph_doc.get("path_tags", [])
        by_arcs = {frozenset(p.arc_ids): p for p in self.paths}
        for tag in tags:
            path = by_arcs.get(frozenset(tag.get("arcs", [])))
            if path is not None:
                path.color_tag = tag.get("tag")

    def attach_script(self) -> None:
        """Queue the scenario's script: gesture stream segments and tokens."""
        needs_stream = any(e.gesture for e in self.scenario.script)
        if needs_stream:
            if not self.recognizer:
                raise ScenarioError("script contains gestures but no models are loaded")
            self._sample_provider = _SampleTimeline(self.scenario, self.models)
        for entry in self.scenario.script:
            if entry.action:
                self._push(
                    int(round(entry.at * 1e6)),
                    PRIO_SCRIPT,
                    "script_action",
                    {"name": entry.action},
                )

    # ------------------------------------------------------------- event pump

    def _push(self, t_us: int, prio: int, kind: str, payload: dict) -> None:
        self._queue_seq += 1
        heapq.heappush(self._queue, (t_us, prio, self._queue_seq, kind, payload))

    def schedule_plan(self, t_us: int) -> None:
        self._push(t_us + PLAN_DELAY_US, PRIO_PLAN, "plan", {})

    def terminal(self) -> bool:
        return self.mode in (MODE_FAILED, MODE_SOLVED)

    def pump(self, until_us: int) -> None:
        """Process every due event up to the given time, in deterministic order."""
        while not self.terminal():
            head = self._queue[0] if self._queue else None
            candidates = []
            if head is not None and head[0] <= until_us:
                candidates.append((head[0], head[1], 0))
            if self._next_tick_us <= until_us:
                candidates.append((self._next_tick_us, PRIO_TICK, 1))
            sample = (
                self._sample_provider.peek_us()
                if self._sample_provider is not None
                else None
            )
            if sample is not None and sample <= until_us:
                candidates.append((sample, PRIO_SAMPLE, 2))
            if not candidates:
                break
            candidates.sort()
            _, _, source = candidates[0]
            if source == 1:
                t_us = self._next_tick_us
                self._next_tick_us += TICK_US
                self.clock_us = t_us
                self._control_tick(t_us / 1e6)
            elif source == 2:
                t_us, sample_obj = self._sample_provider.pop()
                self.clock_us = t_us
                self._handle_sample(sample_obj)
            else:
                t_us, _, _, kind, payload = heapq.heappop(self._queue)
                self.clock_us = t_us
                if kind == "plan":
                    self._plan(t_us / 1e6)
                elif kind == "script_action":
                    self.handle_gesture(payload["name"], t_us / 1e6, source="token")
                elif kind == "sample":
                    self._handle_sample(payload["sample"])
        if not self.terminal():
            self.clock_us = max(self.clock_us, until_us)

    def run_scripted(self) -> dict:
        """Pump until the cooperation solves, fails, or times out."""
        self.attach_script()
        limit_us = int(self.scenario.max_sim_time * 1e6)
        self.pump(limit_us)
        if not self.terminal():
            self._set_mode(MODE_FAILED, "timeout", self.clock_us / 1e6)
        return self.finalize()

    def inject_samples(self, samples: list[InertialSample]) -> None:
        if not self.recognizer:
            raise SessionError("session has no gesture models loaded")
        for s in samples:
            self._push(int(round(s.t * 1e6)), PRIO_SAMPLE, "sample", {"sample": s})

    # ------------------------------------------------------------ event sinks

    def _emit(self, kind: str, t: float, **payload) -> dict:
        self._seq += 1
        record = {"seq": self._seq, "v": self._seq, "t": round(t, 6), "type": kind}
        record.update(payload)
        self.events.append(record)
        if self.trace:
            self.trace.write(record)
        for hook in getattr(self, "subscribers", []):
            hook(record)
        return record

    def _emit_graph_snapshot(self, t: float) -> None:
        snapshot = self.graph.snapshot()
        encoded = json.dumps(snapshot, sort_keys=True)
        if encoded == getattr(self, "_last_graph_json", None):
            return
        self._last_graph_json = encoded
        self._emit("graph", t, graph=snapshot)

    def _set_mode(self, mode: str, reason: str, t: float) -> None:
        if mode == self.mode:
            return
        self.mode = mode
        self.mode_reason = reason
        self._emit("mode", t, mode=mode, reason=reason)

    # -------------------------------------------------------------- handlers

    def handle_gesture(
        self,
        name: str,
        t: float,
        t_start: float | None = None,
        t_end: float | None = None,
        peak: float | None = None,
        source: str = "stream",
    ) -> None:
        """A recognized gesture or an injected human action token."""
        if self.terminal():
            raise SessionError(f"session is {self.mode}; cannot accept actions")
        if t_start is None:
            duration = self.models[name].duration if name in self.models else 0.0
            t_start = t - duration
        if t_end is None:
            t_end = t
        self._emit(
            "gesture",
            t,
            name=name,
            source=source,
            peak=peak,
            t_start=round(t_start, 6),
        )
        self._process_human_action(name, t, t_start, t_end)

    def _process_human_action(
        self, name: str, t_rec: float, t_start: float, t_end: float
    ) -> None:
        candidates = self._match_candidates(name)
        if len(candidates) == 1:
            arc, action = candidates[0]
            self._register_completion(
                arc, action, Agent.HUMAN, t_rec=t_rec, t_ack=t_rec,
                t_start=t_start, t_end=t_end,
            )
        elif not candidates:
            self._handle_unmatched(name, t_rec)
        else:
            deadline = t_rec + self.scenario.ambiguity_timeout
            self._pending.append(
                _PendingGesture(name, t_rec, t_start, t_end, deadline)
            )
            self._emit(
                "ambiguous",
                t_rec,
                name=name,
                candidates=[arc.id for arc, _ in candidates],
            )
            self._set_mode(MODE_AMBIGUOUS, "gesture matches multiple arcs", t_rec)

    def _match_candidates(self, name: str) -> list[tuple[HyperArc, ActionSpec]]:
        out = []
        for arc in self.graph.arcs.values():
            if not arc.active or arc.done or arc.pruned:
                continue
            if arc.ordered:
                fu = arc.first_unended()
                if fu is not None and fu.agent == Agent.HUMAN and fu.name == name:
                    out.append((arc, fu))
            else:
                member = arc.unended_member(name, Agent.HUMAN)
                if member is not None:
                    out.append((arc, member))
        return out

    def _handle_unmatched(self, name: str, t: float) -> None:
        repeated = [
            arc
            for arc in self.graph.active_arcs()
            if arc.ended_member(name, Agent.HUMAN)
        ]
        if not repeated:
            self._emit("ignored", t, name=name, reason="no active arc expects it")
            return
        arc = repeated[0]
        arc.repetition_count += 1
        self._emit("repetition", t, name=name, arc=arc.id, count=arc.repetition_count)
        if arc.repetition_count > MAX_REPETITIONS:
            self._set_mode(
                MODE_FAILED,
                f"action {name!r} repeated beyond limit on arc {arc.id}",
                t,
            )

    def _register_completion(
        self,
        arc: HyperArc,
        action: ActionSpec,
        agent: Agent,
        t_rec: float,
        t_ack: float,
        t_start: float,
        t_end: float,
    ) -> None:
        switched = (
            agent == Agent.HUMAN
            and self.current_path_id is not None
            and not self._path_by_id(self.current_path_id).contains_arc(arc.id)
        )
        try:
            changes = register_action_ended(self.graph, action.id, agent)
        except CooperationFailedError as exc:
            self._emit("registered", t_ack, action=action.id, agent=agent.value,
                       error=str(exc))
            self._set_mode(MODE_FAILED, str(exc), t_ack)
            return
        self._emit(
            "registered",
            t_ack,
            action=action.id,
            name=action.name,
            agent=agent.value,
            arc=arc.id,
            changes=changes.to_dict(),
        )
        t_next = self._stamps.get(action.id, self._last_suggestion_t)
        self.ledger.record(
            ActionStamp(
                key=action.id,
                name=action.name,
                agent=agent.value,
                t_next=t_next,
                t_start=t_start,
                t_rec=t_rec,
                t_ack=t_ack,
                t_end=t_end,
                triggered_switch=switched,
            )
        )
        if switched:
            target = self._switch_target(arc)
            stamp = SwitchStamp(
                action_key=action.id,
                t_start_action=t_start,
                t_next_after=float("nan"),  # filled at the next planning pass
                from_path=self.current_path_id,
                to_path=target.id if target else -1,
            )
            self._pending_switches.append(stamp)
            self.ledger.record_switch(stamp)
            self._emit(
                "switch",
                t_ack,
                action=action.name,
                from_path=self.current_path_id,
                from_tag=self._path_by_id(self.current_path_id).color_tag,
                to_path=stamp.to_path,
                to_tag=target.color_tag if target else None,
                k=len(self.ledger.switches),
            )
        if self.executor.current is not None and (
            self.executor.current.arc_id in changes.arcs_pruned
        ):
            preempted = self.executor.preempt(t_ack)
            self._emit(
                "preempted",
                t_ack,
                action=preempted.action_id,
                name=preempted.name,
            )
            self._last_dispatch = None
        if self.expected_action is not None and (
            self.expected_action[1] == action.id
            or self.graph.arcs[self.expected_action[0]].pruned
        ):
            self.expected_action = None
        self._solved_queue.extend(changes.nodes_solved)
        self.schedule_plan(int(round(t_ack * 1e6)))

    def _switch_target(self, arc: HyperArc) -> CooperationPath | None:
        holders = [
            p
            for p in self.paths
            if p.contains_arc(arc.id) and not p.abandoned(self.graph)
        ]
        if not holders:
            return None
        return min(holders, key=lambda p: (p.cost, p.id))

    def handle_robot_done(self, active, t: float, success: bool = True) -> None:
        self._emit(
            "robot_done",
            t,
            action=active.action_id,
            name=active.name,
            success=success,
            duration=round(t - active.t_start, 6),
        )
        if not success:
            if self.executor.current is active:
                self.executor.preempt(t)
            attempts = self._dispatch_attempts.get(active.action_id, 1)
            if attempts >= 3:
                self._set_mode(
                    MODE_FAILED,
                    f"robot action {active.name!r} failed {attempts} times",
                    t,
                )
                return
            self._last_dispatch = None
            self.schedule_plan(int(round(t * 1e6)))
            return
        arc = self.graph.arcs[active.arc_id]
        action = next(a for a in arc.actions if a.id == active.action_id)
        self._register_completion(
            arc,
            action,
            Agent.ROBOT,
            t_rec=t,
            t_ack=t,
            t_start=active.t_start,
            t_end=t,
        )

    def _handle_sample(self, sample: InertialSample) -> None:
        event = self.recognizer.update(sample)
        values = self.recognizer.current_possibilities()
        self._emit(
            "possibility",
            sample.t,
            values={k: round(v, 6) for k, v in values.items()},
        )
        if event is not None and not self.terminal():
            meta = (
                self._sample_provider.segment_for(event.name, event.t_rec)
                if self._sample_provider is not None
                else None
            )
            self.handle_gesture(
                event.name,
                event.t_rec,
                t_start=meta[0] if meta else None,
                t_end=meta[1] if meta else None,
                peak=round(event.peak, 6),
                source="recognizer",
            )

    # ------------------------------------------------------------------ tick

    def _control_tick(self, t: float) -> None:
        self._tick_count += 1
        telemetry = self.executor.tick(t)
        if telemetry.moved:
            self._moved_ticks += 1
            self._track_aggregates(telemetry)
            if self._moved_ticks % ROBOT_STATE_DECIMATION == 0:
                self._emit_robot_state(t, telemetry)
        if telemetry.completed is not None:
            self.handle_robot_done(telemetry.completed, t, success=True)
        if self._pending and not self.terminal():
            expired = [p for p in self._pending if t >= p.deadline]
            if expired:
                self._set_mode(
                    MODE_FAILED,
                    f"ambiguous gesture {expired[0].name!r} unresolved for "
                    f"{self.scenario.ambiguity_timeout:g} s",
                    t,
                )

    def _track_aggregates(self, telemetry: TickTelemetry) -> None:
        if telemetry.min_clearance is not None:
            if self.min_clearance is None or telemetry.min_clearance < self.min_clearance:
                self.min_clearance = telemetry.min_clearance
        self.max_joint_overrun = max(self.max_joint_overrun, telemetry.max_joint_overrun)
        for key, value in telemetry.activations.items():
            if ":obstacle:" in key:
                self.max_obstacle_activation = max(self.max_obstacle_activation, value)

    def _emit_robot_state(self, t: float, telemetry: TickTelemetry) -> None:
        arms = {}
        for name, chain in self.world.arms.items():
            from ..sim import forward_kinematics

            pose = forward_kinematics(chain)
            arms[name] = {
                "joints": [round(float(j), 5) for j in chain.joints],
                "ee": [round(pose[0], 5), round(pose[1], 5), round(pose[2], 5)],
            }
        self._emit(
            "robot_state",
            t,
            arms=arms,
            objects={
                name: {
                    "position": [round(obj.position[0], 5), round(obj.position[1], 5)],
                    "attached_to": obj.attached_to,
                }
                for name, obj in self.world.objects.items()
            },
            min_clearance=(
                round(telemetry.min_clearance, 5)
                if telemetry.min_clearance is not None
                else None
            ),
            y_dot_max=round(telemetry.y_dot_max, 5),
            activations={
                k: round(v, 4)
                for k, v in telemetry.activations.items()
                if ":obstacle:" in k or v > 0.0
            },
        )

    # ------------------------------------------------------------------ plan

    def _plan(self, t: float) -> None:
        if self.terminal():
            return
        self._resolve_pending(t)
        if self.terminal():
            return
        outcome: Suggestion | GraphSolved | None = None
        while self._solved_queue:
            node = self._solved_queue.pop(0)
            outcome = next_suggested_node(self.graph, self.paths, node)
            if isinstance(outcome, GraphSolved):
                self._emit_graph_snapshot(t)
                self._fill_pending_switches(t)
                self._set_mode(MODE_SOLVED, "root solved", t)
                return
        if outcome is None:
            try:
                outcome = next_suggested_node(self.graph, self.paths, None)
            except DeadlockError as exc:
                self._emit_graph_snapshot(t)
                self._set_mode(MODE_FAILED, str(exc), t)
                return
        self.suggestion = outcome
        self.current_path_id = outcome.path_id
        # Snapshot after the feasibility sweep so newly active arcs (and the
        # action palette derived from them) are already visible.
        self._emit_graph_snapshot(t)
        self._fill_pending_switches(t)
        self._dispatch(outcome, t)

    def _fill_pending_switches(self, t: float) -> None:
        for stamp in self._pending_switches:
            stamp.t_next_after = t
        self._pending_switches.clear()

    def _resolve_pending(self, t: float) -> None:
        remaining: list[_PendingGesture] = []
        for pending in self._pending:
            candidates = self._match_candidates(pending.name)
            if len(candidates) == 1:
                arc, action = candidates[0]
                self._emit("ambiguity_resolved", t, name=pending.name, arc=arc.id)
                self._register_completion(
                    arc, action, Agent.HUMAN,
                    t_rec=pending.t_rec, t_ack=t,
                    t_start=pending.t_start, t_end=pending.t_end,
                )
            elif not candidates:
                self._emit(
                    "ambiguity_dropped", t, name=pending.name,
                    reason="no candidate arc survived",
                )
            else:
                remaining.append(pending)
        self._pending = remaining
        if not self._pending and self.mode == MODE_AMBIGUOUS:
            self._set_mode(MODE_NORMAL, "ambiguity resolved", t)

    def _dispatch(self, suggestion: Suggestion, t: float) -> None:
        node_id = suggestion.node_id
        path = self._path_by_id(suggestion.path_id)
        arc = None
        member = path.member_arc_below(self.graph, node_id)
        if member is not None:
            candidate = self.graph.arcs[member]
            if candidate.active and not candidate.done and not candidate.pruned:
                arc = candidate
        if arc is None:
            for candidate in self.graph.arcs_of_parent(node_id):
                if candidate.active and not candidate.done and not candidate.pruned:
                    arc = candidate
                    break
        if arc is None:
            self._set_mode(
                MODE_FAILED, f"suggested node {node_id!r} has no active arc", t
            )
            return
        action = arc.first_unended()
        if action is None:
            self._set_mode(MODE_FAILED, f"arc {arc.id!r} has no unended action", t)
            return

        dispatch_key = (arc.id, action.id)
        if dispatch_key == self._last_dispatch:
            return
        self._last_dispatch = dispatch_key
        self._last_suggestion_t = t
        self._emit(
            "suggestion",
            t,
            node=node_id,
            path=suggestion.path_id,
            path_tag=path.color_tag,
            cost=suggestion.path_cost,
            arc=arc.id,
            action=action.id,
            action_name=action.name,
            agent=action.agent.value,
            costs={
                str(p.id): p.cost
                for p in self.paths
                if not p.abandoned(self.graph)
            },
        )
        if action.agent == Agent.ROBOT:
            motion = self.scenario.motions.get(action.name)
            if motion is None:
                self._set_mode(
                    MODE_FAILED, f"no motion defined for robot action {action.name!r}", t
                )
                return
            self._stamps[action.id] = t
            self._dispatch_attempts[action.id] = (
                self._dispatch_attempts.get(action.id, 0) + 1
            )
            active = self.executor.start(arc.id, action.id, action.name, motion, t)
            self._emit(
                "dispatch_robot",
                t,
                action=action.id,
                name=action.name,
                arm=motion.arm,
                attempt=self._dispatch_attempts[action.id],
                waypoints=len(motion.waypoints),
            )
        else:
            self._stamps.setdefault(action.id, t)
            self.expected_action = (arc.id, action.id)
            self._emit(
                "expectation",
                t,
                action=action.id,
                name=action.name,
                arc=arc.id,
            )

    # -------------------------------------------------------------- finishing

    def _path_by_id(self, path_id: int) -> CooperationPath:
        for path in self.paths:
            if path.id == path_id:
                return path
        raise SessionError(f"unknown path id {path_id}")

    def metrics(self) -> dict:
        if not self.terminal():
            raise SessionError("metrics are only available once the session ended")
        return self.ledger.summary(self.clock_us / 1e6)

    def finalize(self) -> dict:
        summary = self.metrics()
        record = self._emit(
            "session_end",
            self.clock_us / 1e6,
            mode=self.mode,
            reason=self.mode_reason,
            metrics=summary,
            ledger={
                "actions": [a.to_dict() for a in self.ledger.completed],
                "switches": [s.to_dict() for s in self.ledger.switches],
            },
            aggregates={
                "min_clearance": self.min_clearance,
                "max_joint_overrun": self.max_joint_overrun,
                "max_obstacle_activation": self.max_obstacle_activation,
                "ticks": self._tick_count,
                "moved_ticks": self._moved_ticks,
            },
        )
        if self.trace:
            self.trace.close()
        return record


class _SampleTimeline:
    """Precomputed 40 Hz sample stream: rest padding around gesture segments."""

    def __init__(self, scenario: Scenario, models: dict[str, GestureModel]):
        gravity = tuple(scenario.raw.get("rest_gravity", (0.0, 0.0, 9.81)))
        segments = []
        last_end = 0.0
        for entry in scenario.script:
            if not entry.gesture:
                continue
            model = models.get(entry.gesture)
            if model is None:
                raise ScenarioError(f"no gesture model named {entry.gesture!r}")
            stream = synthesize_gesture_stream(
                model, entry.noise, entry.seed, start_t=entry.at
            )
            segments.append((entry.gesture, entry.at, stream))
            last_end = max(last_end, entry.at + model.duration)
        if not segments:
            self._samples: list[InertialSample] = []
            self._segments = []
            self._idx = 0
            return
        horizon = last_end + 4.0
        grid = rest_samples(horizon, start_t=0.0, gravity=gravity)
        samples = {round(s.t, 6): s for s in grid}
        spans = []
        for name, at, stream in segments:
            for s in stream:
                key = round(s.t, 6)
                if key in samples:
                    samples[key] = s
            spans.append((name, at, stream[-1].t))
        self._samples = [samples[k] for k in sorted(samples)]
        self._segments = spans
        self._idx = 0

    def peek_us(self) -> int | None:
        if self._idx >= len(self._samples):
            return None
        return int(round(self._samples[self._idx].t * 1e6))

    def pop(self) -> tuple[int, InertialSample]:
        sample = self._samples[self._idx]
        self._idx += 1
        return int(round(sample.t * 1e6)), sample

    def segment_for(self, name: str, t_rec: float) -> tuple[float, float] | None:
        """True start/end of the latest ended segment of this gesture."""
        best = None
        for seg_name, start, end in self._segments:
            if seg_name == name and start <= t_rec:
                if best is None or start > best[0]:
                    best = (start, end)
        return best


def run_scenario(
    scenario: Scenario | str | Path | dict,
    models: dict[str, GestureModel] | None = None,
    models_dir: str | Path | None = None,
    trace_path: str | Path | None = None,
) -> CooperationSession:
    """Run one scripted cooperation to completion; returns the session."""
    from .scenario import load_scenario

    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario, models_dir=models_dir)
    if models is None and scenario.needs_models():
        models = scenario.load_models()
    session = CooperationSession(scenario, models=models, trace_path=trace_path)
    session.run_scripted()
    return session
