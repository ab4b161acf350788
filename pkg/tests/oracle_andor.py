"""Independent reference computations for the cooperation graph tests.

Everything here works straight off the JSON document plus explicit flag sets,
with none of the package's data structures, so the main implementation and
these checks can only agree by computing the same mathematics.
"""

from collections import defaultdict


def brute_force_paths(doc):
    """Exhaustively enumerate (node set, arc set) pairs for every path."""
    arcs_of = defaultdict(list)
    children = {}
    for arc in doc["arcs"]:
        arcs_of[arc["parent"]].append(arc["id"])
        children[arc["id"]] = list(arc["children"])
    results = set()

    def rec(node_set, arc_set, frontier):
        frontier = [n for n in frontier if arcs_of.get(n)]
        if not frontier:
            results.add((frozenset(node_set), frozenset(arc_set)))
            return
        node, rest = frontier[0], frontier[1:]
        for arc_id in arcs_of[node]:
            new_nodes = set(node_set)
            new_frontier = list(rest)
            for child in children[arc_id]:
                if child not in new_nodes:
                    new_nodes.add(child)
                    new_frontier.append(child)
            rec(new_nodes, arc_set | {arc_id}, new_frontier)

    rec({doc["root"]}, frozenset(), [doc["root"]])
    return results


def initial_cost(doc, node_set, arc_set):
    node_w = {n["id"]: n.get("weight", 0.0) for n in doc["nodes"]}
    arc_w = {a["id"]: a.get("weight", 0.0) for a in doc["arcs"]}
    return sum(node_w[n] for n in node_set) + sum(arc_w[a] for a in arc_set)


def cost_decrement(doc, node_id, arc_set):
    """Decrement applied to a path holding ``arc_set`` when ``node_id`` solves."""
    node_w = {n["id"]: n.get("weight", 0.0) for n in doc["nodes"]}
    above = [a for a in doc["arcs"] if node_id in a["children"]]
    if node_id == doc["root"] or not above:
        return node_w[node_id]
    h_max = max(a.get("weight", 0.0) for a in above)
    member = [a.get("weight", 0.0) for a in above if a["id"] in arc_set]
    w_h = max(member) if member else 0.0
    return node_w[node_id] + h_max - w_h


def residual_cost(doc, node_set, arc_set, solved_during_run):
    """Initial cost minus one decrement per member node solved during the run."""
    cost = initial_cost(doc, node_set, arc_set)
    for node_id in solved_during_run:
        if node_id in node_set:
            cost -= cost_decrement(doc, node_id, arc_set)
    return cost


def feasible_nodes(doc, solved):
    """Nodes with no preconditions or at least one arc whose children are solved."""
    arcs_of = defaultdict(list)
    for arc in doc["arcs"]:
        arcs_of[arc["parent"]].append(arc)
    feasible = set()
    for node in doc["nodes"]:
        node_id = node["id"]
        below = arcs_of.get(node_id, [])
        if not below:
            feasible.add(node_id)
        elif any(all(c in solved for c in arc["children"]) for arc in below):
            feasible.add(node_id)
    return feasible
