"""AND/OR cooperation graph: nodes, hyper-arcs, feasibility and action bookkeeping.

A hyper-arc joins a set of child nodes (jointly required) to one parent node;
alternative hyper-arcs into the same parent are alternatives.  Each arc carries
the human/robot actions whose completion makes the arc done and, once all the
arc's children are solved, its parent solved.  Solved and feasible flags only
ever go false to true within a run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

MAX_REPETITIONS = 3


class Agent(str, Enum):
    HUMAN = "human"
    ROBOT = "robot"


class GraphError(Exception):
    """Base class for cooperation graph errors."""


class GraphLoadError(GraphError):
    """Malformed or inconsistent graph document."""


class UnknownIdError(GraphError):
    """Reference to a node, arc or action that does not exist."""


class CooperationFailedError(GraphError):
    """An action was repeated beyond the allowed count on one arc."""

    def __init__(self, arc_id: str, action_name: str, count: int):
        super().__init__(
            f"action {action_name!r} repeated {count} times on arc {arc_id!r}"
        )
        self.arc_id = arc_id
        self.action_name = action_name
        self.count = count


@dataclass
class ActionSpec:
    id: str
    name: str
    agent: Agent
    ended: bool = False
    order_index: int | None = None


@dataclass
class HyperArc:
    id: str
    parent: str
    children: list[str]
    weight: float
    actions: list[ActionSpec]
    ordered: bool
    active: bool = False
    done: bool = False
    pruned: bool = False  # mismatch-inactivated; permanent for the run
    repetition_count: int = 0

    def first_unended(self) -> ActionSpec | None:
        for a in self.actions:
            if not a.ended:
                return a
        return None

    def unended_member(self, name: str, agent: Agent) -> ActionSpec | None:
        for a in self.actions:
            if not a.ended and a.name == name and a.agent == agent:
                return a
        return None

    def ended_member(self, name: str, agent: Agent) -> bool:
        return any(a.ended and a.name == name and a.agent == agent for a in self.actions)

    def action_set(self) -> frozenset[tuple[str, str]]:
        return frozenset((a.name, a.agent.value) for a in self.actions)


@dataclass
class Node:
    id: str
    name: str
    weight: float
    solved: bool = False
    feasible: bool = False


@dataclass
class StateChanges:
    """What one registered action ending did to the graph, in scan order."""

    ended: list[tuple[str, str]] = field(default_factory=list)  # (arc, action)
    arcs_done: list[str] = field(default_factory=list)
    arcs_pruned: list[str] = field(default_factory=list)
    nodes_solved: list[str] = field(default_factory=list)
    repetitions: list[tuple[str, int]] = field(default_factory=list)  # (arc, count)

    def to_dict(self) -> dict:
        return {
            "ended": [list(e) for e in self.ended],
            "arcs_done": list(self.arcs_done),
            "arcs_pruned": list(self.arcs_pruned),
            "nodes_solved": list(self.nodes_solved),
            "repetitions": [list(r) for r in self.repetitions],
        }


class AndOrGraph:
    """Mutable cooperation graph state.

    Not internally synchronized: all mutations are expected to arrive through
    a single owner (the session event loop); concurrent readers should work on
    snapshots.
    """

    def __init__(self, nodes: dict[str, Node], arcs: dict[str, HyperArc], root: str):
        self.nodes = nodes
        self.arcs = arcs
        self.root = root
        self.solved = False
        self._arcs_of_parent: dict[str, list[str]] = {n: [] for n in nodes}
        self._arcs_above: dict[str, list[str]] = {n: [] for n in nodes}
        self._action_index: dict[str, tuple[str, str]] = {}
        for arc in arcs.values():
            self._arcs_of_parent[arc.parent].append(arc.id)
            for child in arc.children:
                self._arcs_above[child].append(arc.id)
            for a in arc.actions:
                self._action_index[a.id] = (arc.id, a.id)

    def arcs_of_parent(self, node_id: str) -> list[HyperArc]:
        return [self.arcs[a] for a in self._arcs_of_parent[node_id]]

    def arcs_above(self, node_id: str) -> list[HyperArc]:
        return [self.arcs[a] for a in self._arcs_above[node_id]]

    def is_leaf(self, node_id: str) -> bool:
        return not self._arcs_of_parent[node_id]

    def find_action(self, action_id: str) -> tuple[HyperArc, ActionSpec]:
        if action_id not in self._action_index:
            raise UnknownIdError(f"unknown action id {action_id!r}")
        arc_id, _ = self._action_index[action_id]
        arc = self.arcs[arc_id]
        for a in arc.actions:
            if a.id == action_id:
                return arc, a
        raise UnknownIdError(f"unknown action id {action_id!r}")

    def active_arcs(self) -> list[HyperArc]:
        return [a for a in self.arcs.values() if a.active and not a.done and not a.pruned]

    def snapshot(self) -> dict:
        """State view for the event stream and API."""
        return {
            "root": self.root,
            "solved": self.solved,
            "nodes": [
                {
                    "id": n.id,
                    "name": n.name,
                    "weight": n.weight,
                    "solved": n.solved,
                    "feasible": n.feasible,
                }
                for n in self.nodes.values()
            ],
            "arcs": [
                {
                    "id": h.id,
                    "parent": h.parent,
                    "children": list(h.children),
                    "weight": h.weight,
                    "ordered": h.ordered,
                    "active": h.active,
                    "done": h.done,
                    "pruned": h.pruned,
                    "repetition_count": h.repetition_count,
                    "actions": [
                        {
                            "id": a.id,
                            "name": a.name,
                            "agent": a.agent.value,
                            "ended": a.ended,
                        }
                        for a in h.actions
                    ],
                }
                for h in self.arcs.values()
            ],
        }


def load_graph(description: dict | str | Path) -> AndOrGraph:
    """Build a graph from its JSON document and compute initial feasibility.

    The document holds ``nodes[{id,name,weight,solved}]``,
    ``arcs[{id,parent,children[],weight,ordered,actions[{id,name,agent}]}]``
    and ``root``.  Action ids may be omitted; ``<arc>:<index>`` is generated.
    """
    doc = _read_document(description)
    nodes = _parse_nodes(doc)
    root = doc.get("root")
    if not isinstance(root, str) or root not in nodes:
        raise GraphLoadError(f"root {root!r} is not a declared node")
    arcs = _parse_arcs(doc, nodes)
    _validate_structure(nodes, arcs, root)

    graph = AndOrGraph(nodes, arcs, root)
    graph.solved = False
    for node_id in graph.nodes:
        update_feasibility(graph, node_id)
    return graph


def update_feasibility(graph: AndOrGraph, node_id: str) -> bool:
    """Recompute feasibility of one node; feasibility is sticky.

    A node with no arcs below it has no preconditions.  Otherwise every
    non-pruned arc whose children are all solved becomes active, and the node
    is feasible if it has an active arc.
    """
    if node_id not in graph.nodes:
        raise UnknownIdError(f"unknown node id {node_id!r}")
    node = graph.nodes[node_id]
    if node.feasible:
        return True
    if graph.is_leaf(node_id):
        node.feasible = True
        return True
    for arc in graph.arcs_of_parent(node_id):
        if arc.pruned or arc.active:
            continue
        if all(graph.nodes[c].solved for c in arc.children):
            arc.active = True
    if any(arc.active for arc in graph.arcs_of_parent(node_id)):
        node.feasible = True
        return True
    return False


def register_action_ended(graph: AndOrGraph, action_id: str, agent: Agent | str) -> StateChanges:
    """Record that an action ended and propagate arc/node state.

    The ending is matched against every currently active arc: ordered arcs
    match on their first unended action and are pruned on mismatch, unordered
    arcs match on unended membership and ignore mismatches.  A match against
    an already ended action counts as a repetition of that arc's sequence;
    more than MAX_REPETITIONS repetitions fail the cooperation.
    """
    agent = Agent(agent)
    owning_arc, action = graph.find_action(action_id)
    if action.agent != agent:
        raise GraphError(
            f"action {action_id!r} belongs to agent {action.agent.value!r}, not {agent.value!r}"
        )
    event = (action.name, agent)
    changes = StateChanges()
    for arc in graph.arcs.values():
        if not arc.active or arc.done or arc.pruned:
            continue
        _apply_event_to_arc(graph, arc, event, changes)
    return changes


def _apply_event_to_arc(
    graph: AndOrGraph,
    arc: HyperArc,
    event: tuple[str, Agent],
    changes: StateChanges,
) -> None:
    name, agent = event
    matched: ActionSpec | None = None
    if arc.ordered:
        fu = arc.first_unended()
        if fu is not None and fu.name == name and fu.agent == agent:
            matched = fu
        elif arc.ended_member(name, agent):
            _count_repetition(arc, name, changes)
            return
        else:
            # Out-of-order or foreign ending invalidates the ordered sequence.
            arc.pruned = True
            arc.active = False
            changes.arcs_pruned.append(arc.id)
            return
    else:
        matched = arc.unended_member(name, agent)
        if matched is None:
            if arc.ended_member(name, agent):
                _count_repetition(arc, name, changes)
            return

    matched.ended = True
    changes.ended.append((arc.id, matched.id))
    if all(a.ended for a in arc.actions):
        arc.done = True
        changes.arcs_done.append(arc.id)
        parent = graph.nodes[arc.parent]
        if not parent.solved and all(graph.nodes[c].solved for c in arc.children):
            parent.solved = True
            changes.nodes_solved.append(parent.id)


def _count_repetition(arc: HyperArc, name: str, changes: StateChanges) -> None:
    arc.repetition_count += 1
    changes.repetitions.append((arc.id, arc.repetition_count))
    if arc.repetition_count > MAX_REPETITIONS:
        raise CooperationFailedError(arc.id, name, arc.repetition_count)


def _read_document(description: dict | str | Path) -> dict:
    if isinstance(description, dict):
        return description
    path = Path(description)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphLoadError(f"cannot read graph document: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphLoadError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphLoadError("graph document must be a JSON object")
    return doc


def _parse_nodes(doc: dict) -> dict[str, Node]:
    nodes: dict[str, Node] = {}
    for item in doc.get("nodes", []):
        node_id = item.get("id")
        if not isinstance(node_id, str) or not node_id:
            raise GraphLoadError(f"node with missing or invalid id: {item!r}")
        if node_id in nodes:
            raise GraphLoadError(f"duplicate node id {node_id!r}")
        weight = float(item.get("weight", 0.0))
        if weight < 0:
            raise GraphLoadError(f"node {node_id!r} has negative weight")
        nodes[node_id] = Node(
            id=node_id,
            name=item.get("name", node_id),
            weight=weight,
            solved=bool(item.get("solved", False)),
        )
    if not nodes:
        raise GraphLoadError("graph document declares no nodes")
    return nodes


def _parse_arcs(doc: dict, nodes: dict[str, Node]) -> dict[str, HyperArc]:
    arcs: dict[str, HyperArc] = {}
    seen_action_sets: dict[frozenset, str] = {}
    seen_action_ids: set[str] = set()
    for item in doc.get("arcs", []):
        arc_id = item.get("id")
        if not isinstance(arc_id, str) or not arc_id:
            raise GraphLoadError(f"arc with missing or invalid id: {item!r}")
        if arc_id in arcs:
            raise GraphLoadError(f"duplicate arc id {arc_id!r}")
        parent = item.get("parent")
        if parent not in nodes:
            raise GraphLoadError(f"arc {arc_id!r} references unknown parent {parent!r}")
        children = item.get("children", [])
        if not children:
            raise GraphLoadError(f"arc {arc_id!r} has no children")
        for child in children:
            if child not in nodes:
                raise GraphLoadError(f"arc {arc_id!r} references unknown child {child!r}")
        weight = float(item.get("weight", 0.0))
        if weight < 0:
            raise GraphLoadError(f"arc {arc_id!r} has negative weight")
        ordered = bool(item.get("ordered", False))
        actions = _parse_actions(arc_id, item.get("actions", []), ordered, seen_action_ids)
        arc = HyperArc(
            id=arc_id,
            parent=parent,
            children=list(children),
            weight=weight,
            actions=actions,
            ordered=ordered,
        )
        key = arc.action_set()
        if key in seen_action_sets:
            raise GraphLoadError(
                f"arcs {seen_action_sets[key]!r} and {arc_id!r} carry the same action set"
            )
        seen_action_sets[key] = arc_id
        arcs[arc_id] = arc
    return arcs


def _parse_actions(
    arc_id: str, items: list, ordered: bool, seen_ids: set[str]
) -> list[ActionSpec]:
    if not items:
        raise GraphLoadError(f"arc {arc_id!r} declares no actions")
    actions: list[ActionSpec] = []
    names: set[tuple[str, str]] = set()
    for k, item in enumerate(items):
        name = item.get("name")
        if not isinstance(name, str) or not name:
            raise GraphLoadError(f"arc {arc_id!r} action {k} has no name")
        try:
            agent = Agent(item.get("agent"))
        except ValueError:
            raise GraphLoadError(
                f"arc {arc_id!r} action {name!r} has invalid agent {item.get('agent')!r}"
            ) from None
        if (name, agent.value) in names:
            raise GraphLoadError(f"arc {arc_id!r} repeats action {name!r}")
        names.add((name, agent.value))
        action_id = item.get("id") or f"{arc_id}:{k}"
        if action_id in seen_ids:
            raise GraphLoadError(f"duplicate action id {action_id!r}")
        seen_ids.add(action_id)
        actions.append(
            ActionSpec(
                id=action_id,
                name=name,
                agent=agent,
                order_index=k if ordered else None,
            )
        )
    return actions


def _validate_structure(nodes: dict[str, Node], arcs: dict[str, HyperArc], root: str) -> None:
    child_of: set[str] = set()
    for arc in arcs.values():
        child_of.update(arc.children)
    if root in child_of:
        raise GraphLoadError(f"root {root!r} appears as a child of some arc")
    orphans = [n for n in nodes if n != root and n not in child_of]
    if orphans:
        raise GraphLoadError(f"nodes unreachable from the root: {orphans!r}")

    # Cycle check over the parent -> children dependency relation.
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    below: dict[str, list[str]] = {n: [] for n in nodes}
    for arc in arcs.values():
        below[arc.parent].extend(arc.children)
    stack: list[tuple[str, int]] = [(root, 0)]
    color[root] = GREY
    while stack:
        node, idx = stack[-1]
        if idx < len(below[node]):
            stack[-1] = (node, idx + 1)
            nxt = below[node][idx]
            if color[nxt] == GREY:
                raise GraphLoadError(f"hypergraph contains a cycle through {nxt!r}")
            if color[nxt] == WHITE:
                color[nxt] = GREY
                stack.append((nxt, 0))
        else:
            color[node] = BLACK
            stack.pop()
