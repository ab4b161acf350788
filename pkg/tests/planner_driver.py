"""Seeded random cooperation graphs and an oracle-checked planning drive.

The driver solves a graph the way a compliant cooperation would: take the
suggestion, end the actions of one of the suggested node's active arcs, feed
the resulting solves back, repeat.  At every step the implementation's path
costs, feasibility flags and chosen suggestion are checked against the
document-level reference computations in ``oracle_andor``.
"""

import random

from hrcoop.andor import (
    Agent,
    GraphSolved,
    Suggestion,
    generate_all_paths,
    load_graph,
    next_suggested_node,
    register_action_ended,
)

from oracle_andor import brute_force_paths, feasible_nodes, residual_cost


def random_graph_doc(seed, max_nodes=12, max_arcs_per_node=2):
    """Random acyclic document: arcs point to higher-numbered nodes, leaves solved."""
    rng = random.Random(seed)
    n = rng.randint(3, max_nodes)
    arcs = []
    for i in range(n - 1):
        if i > 0 and rng.random() < 0.25:
            continue  # node may turn out to be a leaf or get dropped
        n_arcs = rng.randint(1, max_arcs_per_node)
        for j in range(n_arcs):
            pool = list(range(i + 1, n))
            rng.shuffle(pool)
            children = sorted(pool[: rng.randint(1, min(3, len(pool)))])
            arcs.append(
                {
                    "id": f"h{i}_{j}",
                    "parent": f"n{i}",
                    "children": [f"n{c}" for c in children],
                    "weight": float(rng.randint(0, 5)),
                    "ordered": False,
                    "actions": [
                        {"name": f"act_h{i}_{j}_{k}", "agent": rng.choice(["human", "robot"])}
                        for k in range(rng.randint(1, 2))
                    ],
                }
            )

    # Keep only nodes reachable from the root, then drop arcs of removed nodes.
    reachable = {"n0"}
    frontier = ["n0"]
    arcs_of = {}
    for arc in arcs:
        arcs_of.setdefault(arc["parent"], []).append(arc)
    while frontier:
        node = frontier.pop()
        for arc in arcs_of.get(node, []):
            for child in arc["children"]:
                if child not in reachable:
                    reachable.add(child)
                    frontier.append(child)
    arcs = [a for a in arcs if a["parent"] in reachable]
    has_children = {a["parent"] for a in arcs}
    nodes = [
        {
            "id": f"n{i}",
            "weight": float(rng.randint(0, 5)),
            "solved": f"n{i}" not in has_children,  # leaves start solved
        }
        for i in range(n)
        if f"n{i}" in reachable
    ]
    return {"root": "n0", "nodes": nodes, "arcs": arcs}


def drive_and_check(doc):
    """Solve the graph along suggestions, verifying every step against the oracle."""
    graph = load_graph(doc)
    paths = generate_all_paths(graph)

    got = {(frozenset(p.node_ids), frozenset(p.arc_ids)) for p in paths}
    expected = brute_force_paths(doc)
    assert got == expected, f"path sets differ: {len(got)} vs {len(expected)}"
    by_key = {(frozenset(p.node_ids), frozenset(p.arc_ids)): p.id for p in paths}

    solved_during_run: list[str] = []
    initially_solved = {n["id"] for n in doc["nodes"] if n.get("solved")}

    def check_state(suggestion):
        solved_now = initially_solved | set(solved_during_run)
        feas = feasible_nodes(doc, solved_now)
        for node in graph.nodes.values():
            assert node.feasible == (node.id in feas), node.id
            assert node.solved == (node.id in solved_now), node.id
        ranked = []
        for (nset, aset), pid in by_key.items():
            cost = residual_cost(doc, nset, aset, solved_during_run)
            ranked.append((cost, pid, nset, aset))
        for path in paths:
            want = next(c for c, pid, _, _ in ranked if pid == path.id)
            assert abs(path.cost - want) < 1e-9, f"path {path.id} cost drift"
        best_cost, best_id, best_nodes, _ = min(ranked, key=lambda r: (r[0], r[1]))
        assert isinstance(suggestion, Suggestion)
        assert suggestion.path_id == best_id
        best_path = next(p for p in paths if p.id == best_id)
        frontier = next(
            n for n in best_path.node_ids if n in feas and n not in solved_now
        )
        assert suggestion.node_id == frontier

    suggestion = next_suggested_node(graph, paths)
    steps = 0
    while True:
        steps += 1
        assert steps < 100, "drive did not terminate"
        check_state(suggestion)
        node_id = suggestion.node_id
        arc = next(a for a in graph.arcs_of_parent(node_id) if a.active and not a.done)
        outcome = None
        for action in arc.actions:
            changes = register_action_ended(graph, action.id, Agent(action.agent))
            for solved in changes.nodes_solved:
                solved_during_run.append(solved)
                outcome = next_suggested_node(graph, paths, solved)
        assert outcome is not None, "suggested node did not solve"
        if isinstance(outcome, GraphSolved):
            assert graph.solved
            return steps
        suggestion = outcome
