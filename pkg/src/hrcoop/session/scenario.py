"""Scenario documents: graph asset, gesture models, world, motions, script.

A scenario bundles everything one cooperation run needs.  The human side is
an open-loop script of timed gesture executions (synthesized from the trained
models and replayed through the recognizer) or direct action tokens; the
robot side maps action names to arm motions (waypoint lists with optional
grasp operations).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..andor import AndOrGraph, load_graph
from ..assets import asset_path
from ..gestures import GestureModel, load_model_set
from ..sim import PlanarWorld, load_world


class ScenarioError(Exception):
    """Malformed scenario document or unresolvable references."""


@dataclass
class Waypoint:
    target: tuple[float, float, float]
    grasp: dict | None = None          # {"op": "pick"|"place", "object": name}
    tolerance_pos: float = 0.02
    tolerance_ang: float = 0.08


@dataclass
class Motion:
    action_name: str
    arm: str
    waypoints: list[Waypoint]
    transition_ramp: float = 0.5


@dataclass
class ScriptEntry:
    at: float
    gesture: str | None = None         # replayed through the recognizer
    action: str | None = None          # direct token, bypasses recognition
    noise: float = 0.02
    seed: int = 0


@dataclass
class Scenario:
    name: str
    seed: int
    graph_doc: dict
    world_doc: dict
    motions: dict[str, Motion]
    script: list[ScriptEntry]
    models_dir: Path | None
    ambiguity_timeout: float = 30.0
    max_sim_time: float = 300.0
    path: Path | None = None
    raw: dict = field(default_factory=dict)

    def build_graph(self) -> AndOrGraph:
        return load_graph(self.graph_doc)

    def build_world(self) -> PlanarWorld:
        return load_world(self.world_doc)

    def load_models(self) -> dict[str, GestureModel]:
        if self.models_dir is None:
            raise ScenarioError(f"scenario {self.name!r} declares no gesture models")
        return load_model_set(self.models_dir)

    def needs_models(self) -> bool:
        return any(e.gesture for e in self.script)


def _resolve(ref: str, base: Path | None) -> Path:
    candidate = Path(ref)
    if candidate.is_absolute() and candidate.exists():
        return candidate
    if base is not None and (base / ref).exists():
        return base / ref
    try:
        return asset_path(ref)
    except FileNotFoundError:
        raise ScenarioError(f"cannot resolve reference {ref!r}") from None


def load_scenario(
    source: str | Path | dict,
    models_dir: str | Path | None = None,
) -> Scenario:
    """Parse a scenario document; ``models_dir`` overrides the document's."""
    path: Path | None = None
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        if not path.exists():
            path = _resolve(str(source), None)
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    base = path.parent if path else None

    graph_ref = doc.get("graph")
    if isinstance(graph_ref, dict):
        graph_doc = graph_ref
    elif isinstance(graph_ref, str):
        graph_doc = json.loads(_resolve(graph_ref, base).read_text())
    else:
        raise ScenarioError("scenario is missing its graph reference")

    world_doc = doc.get("world")
    if isinstance(world_doc, str):
        world_doc = json.loads(_resolve(world_doc, base).read_text())
    if not isinstance(world_doc, dict):
        raise ScenarioError("scenario is missing its world description")

    motions = {}
    for name, item in doc.get("motions", {}).items():
        waypoints = [
            Waypoint(
                target=tuple(w["target"]),
                grasp=w.get("grasp"),
                tolerance_pos=float(w.get("tolerance_pos", 0.02)),
                tolerance_ang=float(w.get("tolerance_ang", 0.08)),
            )
            for w in item["waypoints"]
        ]
        if not waypoints:
            raise ScenarioError(f"motion {name!r} has no waypoints")
        motions[name] = Motion(
            action_name=name,
            arm=item["arm"],
            waypoints=waypoints,
            transition_ramp=float(item.get("ramp", 0.5)),
        )

    script = []
    for item in doc.get("script", []):
        entry = ScriptEntry(
            at=float(item["at"]),
            gesture=item.get("gesture"),
            action=item.get("action"),
            noise=float(item.get("noise", 0.02)),
            seed=int(item.get("seed", 0)),
        )
        if (entry.gesture is None) == (entry.action is None):
            raise ScenarioError(
                f"script entry at t={entry.at} must set exactly one of gesture/action"
            )
        script.append(entry)
    script.sort(key=lambda e: e.at)

    resolved_models: Path | None = None
    model_ref = models_dir if models_dir is not None else doc.get("models")
    if model_ref is not None:
        resolved_models = Path(model_ref)
        if not resolved_models.is_absolute() and base is not None:
            candidate = base / model_ref
            if candidate.exists():
                resolved_models = candidate

    return Scenario(
        name=doc.get("name", path.stem if path else "scenario"),
        seed=int(doc.get("seed", 0)),
        graph_doc=graph_doc,
        world_doc=world_doc,
        motions=motions,
        script=script,
        models_dir=resolved_models,
        ambiguity_timeout=float(doc.get("ambiguity_timeout", 30.0)),
        max_sim_time=float(doc.get("max_sim_time", 300.0)),
        path=path,
        raw=doc,
    )
