"""Cooperation paths: offline enumeration, online cost updates, suggestions.

A cooperation path fixes one hyper-arc choice for every non-leaf node it
contains, starting at the root.  All paths are enumerated once offline; while
the cooperation runs their residual costs shrink as nodes get solved and the
minimum-cost surviving path supplies the next node to work on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import AndOrGraph, GraphError, update_feasibility


class DeadlockError(GraphError):
    """Root unsolved but no surviving path offers a feasible unsolved node."""


@dataclass
class CooperationPath:
    id: int
    node_ids: list[str]  # insertion order, root first
    arc_ids: list[str]
    cost: float
    color_tag: str | None = None
    node_set: set[str] = field(default_factory=set)
    arc_set: set[str] = field(default_factory=set)

    def contains_node(self, node_id: str) -> bool:
        return node_id in self.node_set

    def contains_arc(self, arc_id: str) -> bool:
        return arc_id in self.arc_set

    def abandoned(self, graph: AndOrGraph) -> bool:
        return any(graph.arcs[a].pruned for a in self.arc_ids)

    def member_arc_below(self, graph: AndOrGraph, node_id: str) -> str | None:
        """The path's chosen arc whose parent is the given node."""
        for arc_id in self.arc_ids:
            if graph.arcs[arc_id].parent == node_id:
                return arc_id
        return None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "color_tag": self.color_tag,
            "nodes": list(self.node_ids),
            "arcs": list(self.arc_ids),
            "cost": self.cost,
        }


@dataclass(frozen=True)
class Suggestion:
    node_id: str
    path_id: int
    path_cost: float


class GraphSolved:
    """Sentinel result: the root was solved, the cooperation is complete."""

    def __repr__(self) -> str:  # pragma: no cover
        return "GraphSolved()"


class _Partial:
    __slots__ = ("path", "frontier")

    def __init__(self, path: CooperationPath, frontier: deque[str]):
        self.path = path
        self.frontier = frontier


def generate_all_paths(graph: AndOrGraph) -> list[CooperationPath]:
    """Enumerate every cooperation path, root first.

    Single-arc nodes extend the current path in place; nodes offering several
    arcs fork one copy per extra arc, appended in document order, so path ids
    reflect creation order deterministically.
    """
    first = CooperationPath(id=0, node_ids=[], arc_ids=[], cost=0.0)
    _add_node(first, graph.root)
    partials: list[_Partial] = [_Partial(first, deque([graph.root]))]
    next_id = 1

    while True:
        current = next((p for p in partials if p.frontier), None)
        if current is None:
            break
        node_id = current.frontier.popleft()
        arcs = graph.arcs_of_parent(node_id)
        if not arcs:
            continue
        if len(arcs) == 1:
            _extend(current, arcs[0].id, arcs[0].children)
            continue
        base_nodes = list(current.path.node_ids)
        base_arcs = list(current.path.arc_ids)
        base_frontier = list(current.frontier)
        _extend(current, arcs[0].id, arcs[0].children)
        for arc in arcs[1:]:
            clone = CooperationPath(
                id=next_id,
                node_ids=list(base_nodes),
                arc_ids=list(base_arcs),
                cost=0.0,
                node_set=set(base_nodes),
                arc_set=set(base_arcs),
            )
            next_id += 1
            branched = _Partial(clone, deque(base_frontier))
            _extend(branched, arc.id, arc.children)
            partials.append(branched)

    paths = sorted((p.path for p in partials), key=lambda p: p.id)
    for path in paths:
        path.cost = sum(graph.nodes[n].weight for n in path.node_ids) + sum(
            graph.arcs[a].weight for a in path.arc_ids
        )
    return paths


def _add_node(path: CooperationPath, node_id: str) -> bool:
    if node_id in path.node_set:
        return False
    path.node_ids.append(node_id)
    path.node_set.add(node_id)
    return True


def _extend(partial: _Partial, arc_id: str, children: list[str]) -> None:
    partial.path.arc_ids.append(arc_id)
    partial.path.arc_set.add(arc_id)
    for child in children:
        if _add_node(partial.path, child):
            partial.frontier.append(child)


def update_all_paths(
    graph: AndOrGraph, paths: list[CooperationPath], solved_node: str
) -> list[tuple[int, float]]:
    """Apply the cost decrement for a newly solved node to every path holding it.

    The decrement is ``w_n + h_m - w_h`` where ``h_m`` is the maximum weight
    over all arcs anywhere in the graph having the node among their children
    and ``w_h`` the weight of the path's own arc above the node (the maximum
    if, through a diamond, the path holds several).  The root, having no arc
    above it, decrements by its own weight.  Returns (path id, decrement).
    """
    if solved_node not in graph.nodes:
        raise GraphError(f"unknown node id {solved_node!r}")
    node = graph.nodes[solved_node]
    arcs_above = graph.arcs_above(solved_node)
    h_max = max((a.weight for a in arcs_above), default=0.0)
    applied: list[tuple[int, float]] = []
    for path in paths:
        if not path.contains_node(solved_node):
            continue
        if solved_node == graph.root or not arcs_above:
            decrement = node.weight
        else:
            member_above = [a.weight for a in arcs_above if path.contains_arc(a.id)]
            w_h = max(member_above) if member_above else 0.0
            decrement = node.weight + h_max - w_h
        path.cost -= decrement
        applied.append((path.id, decrement))
    return applied


def find_optimal_path(
    graph: AndOrGraph, paths: list[CooperationPath]
) -> CooperationPath | None:
    """Minimum-cost surviving path; ties break on the lower path id."""
    alive = [p for p in paths if not p.abandoned(graph)]
    if not alive:
        return None
    return min(alive, key=lambda p: (p.cost, p.id))


def next_suggested_node(
    graph: AndOrGraph,
    paths: list[CooperationPath],
    last_solved: str | None = None,
) -> Suggestion | GraphSolved:
    """Refresh feasibility and costs, then pick the next node to solve.

    Pass ``last_solved=None`` for the very first suggestion after setup.
    Solving the root marks the whole graph solved.  The suggestion is the
    first feasible unsolved node, in path order, of the minimum-cost surviving
    path; if that path has none, cheaper-first fallback over the remaining
    surviving paths applies, and a graph with no candidate anywhere while the
    root is unsolved is deadlocked.
    """
    if last_solved is not None:
        if last_solved not in graph.nodes:
            raise GraphError(f"unknown node id {last_solved!r}")
        graph.nodes[last_solved].solved = True
        if last_solved == graph.root:
            graph.solved = True
            return GraphSolved()
    for node_id in graph.nodes:
        update_feasibility(graph, node_id)
    if last_solved is not None:
        update_all_paths(graph, paths, last_solved)

    alive = sorted(
        (p for p in paths if not p.abandoned(graph)), key=lambda p: (p.cost, p.id)
    )
    for path in alive:
        for node_id in path.node_ids:
            node = graph.nodes[node_id]
            if node.feasible and not node.solved:
                return Suggestion(node_id=node_id, path_id=path.id, path_cost=path.cost)
    raise DeadlockError("no feasible unsolved node on any surviving path")
