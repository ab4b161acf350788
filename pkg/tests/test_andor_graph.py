"""Cooperation graph loading, feasibility and action bookkeeping."""

import pytest

from hrcoop.andor import (
    Agent,
    CooperationFailedError,
    GraphLoadError,
    UnknownIdError,
    load_graph,
    register_action_ended,
    update_feasibility,
)
from hrcoop.assets import asset_path


def doc_single_node():
    return {
        "root": "r",
        "nodes": [{"id": "r", "name": "goal", "weight": 1}],
        "arcs": [],
    }


def doc_two_level(ordered=False, solved_leaves=True):
    return {
        "root": "r",
        "nodes": [
            {"id": "r", "weight": 1},
            {"id": "a", "weight": 1, "solved": solved_leaves},
            {"id": "b", "weight": 1, "solved": solved_leaves},
        ],
        "arcs": [
            {
                "id": "h1",
                "parent": "r",
                "children": ["a", "b"],
                "weight": 1,
                "ordered": ordered,
                "actions": [
                    {"name": "first", "agent": "human"},
                    {"name": "second", "agent": "human"},
                ],
            }
        ],
    }


class TestLoad:
    def test_screwing_asset_counts(self):
        graph = load_graph(asset_path("screwing_graph.json"))
        assert len(graph.nodes) == 9
        assert len(graph.arcs) == 9
        assert not graph.solved

    def test_single_node_document(self):
        graph = load_graph(doc_single_node())
        assert graph.nodes["r"].feasible
        assert not graph.solved

    def test_dangling_child_reference(self):
        doc = doc_two_level()
        doc["arcs"][0]["children"] = ["a", "n99"]
        with pytest.raises(GraphLoadError, match="n99"):
            load_graph(doc)

    def test_dangling_parent_reference(self):
        doc = doc_two_level()
        doc["arcs"][0]["parent"] = "nope"
        with pytest.raises(GraphLoadError, match="nope"):
            load_graph(doc)

    def test_duplicate_action_set_rejected(self):
        doc = doc_two_level()
        doc["nodes"].append({"id": "c", "weight": 1, "solved": True})
        doc["arcs"].append(
            {
                "id": "h2",
                "parent": "r",
                "children": ["c"],
                "weight": 1,
                "actions": [
                    {"name": "second", "agent": "human"},
                    {"name": "first", "agent": "human"},
                ],
            }
        )
        with pytest.raises(GraphLoadError, match="same action set"):
            load_graph(doc)

    def test_cycle_rejected(self):
        doc = doc_two_level()
        doc["arcs"] += [
            {
                "id": "h2",
                "parent": "a",
                "children": ["b"],
                "weight": 1,
                "actions": [{"name": "down", "agent": "robot"}],
            },
            {
                "id": "h3",
                "parent": "b",
                "children": ["a"],
                "weight": 1,
                "actions": [{"name": "loop", "agent": "robot"}],
            },
        ]
        with pytest.raises(GraphLoadError, match="cycle"):
            load_graph(doc)

    def test_root_as_child_rejected(self):
        doc = doc_two_level()
        doc["arcs"][0]["children"] = ["a", "r"]
        with pytest.raises(GraphLoadError, match="root"):
            load_graph(doc)

    def test_unreachable_node_rejected(self):
        doc = doc_two_level()
        doc["nodes"].append({"id": "island", "weight": 1})
        with pytest.raises(GraphLoadError, match="island"):
            load_graph(doc)

    def test_negative_weight_rejected(self):
        doc = doc_two_level()
        doc["nodes"][0]["weight"] = -2
        with pytest.raises(GraphLoadError, match="negative"):
            load_graph(doc)


class TestFeasibility:
    def test_leaf_is_feasible(self):
        graph = load_graph(doc_two_level(solved_leaves=False))
        assert graph.nodes["a"].feasible
        assert graph.nodes["b"].feasible

    def test_arc_with_solved_children_is_active(self):
        graph = load_graph(doc_two_level(solved_leaves=True))
        assert graph.nodes["r"].feasible
        assert graph.arcs["h1"].active

    def test_unsolved_children_keep_arc_inactive(self):
        graph = load_graph(doc_two_level(solved_leaves=False))
        assert not graph.nodes["r"].feasible
        assert not graph.arcs["h1"].active

    def test_feasibility_is_sticky(self):
        graph = load_graph(doc_two_level(solved_leaves=True))
        assert update_feasibility(graph, "r")
        graph.nodes["a"].solved = False  # simulated inconsistent input
        assert update_feasibility(graph, "r")
        assert graph.nodes["r"].feasible

    def test_unknown_node(self):
        graph = load_graph(doc_two_level())
        with pytest.raises(UnknownIdError):
            update_feasibility(graph, "nope")


class TestRegister:
    def test_unordered_any_order(self):
        graph = load_graph(doc_two_level(ordered=False))
        second = graph.arcs["h1"].actions[1]
        first = graph.arcs["h1"].actions[0]
        register_action_ended(graph, second.id, Agent.HUMAN)
        assert not graph.arcs["h1"].done
        changes = register_action_ended(graph, first.id, Agent.HUMAN)
        assert graph.arcs["h1"].done
        assert changes.nodes_solved == ["r"]

    def test_ordered_out_of_order_prunes(self):
        graph = load_graph(doc_two_level(ordered=True))
        second = graph.arcs["h1"].actions[1]
        changes = register_action_ended(graph, second.id, Agent.HUMAN)
        assert changes.arcs_pruned == ["h1"]
        assert graph.arcs["h1"].pruned
        assert not graph.arcs["h1"].active

    def test_single_action_arc_solves_parent(self):
        doc = {
            "root": "r",
            "nodes": [{"id": "r", "weight": 1}, {"id": "a", "weight": 1, "solved": True}],
            "arcs": [
                {
                    "id": "h1",
                    "parent": "r",
                    "children": ["a"],
                    "weight": 1,
                    "actions": [{"name": "only", "agent": "robot"}],
                }
            ],
        }
        graph = load_graph(doc)
        changes = register_action_ended(graph, "h1:0", Agent.ROBOT)
        assert changes.arcs_done == ["h1"]
        assert changes.nodes_solved == ["r"]
        assert graph.nodes["r"].solved

    def test_wrong_agent_rejected(self):
        graph = load_graph(doc_two_level())
        action = graph.arcs["h1"].actions[0]
        with pytest.raises(Exception, match="agent"):
            register_action_ended(graph, action.id, Agent.ROBOT)

    def test_unknown_action(self):
        graph = load_graph(doc_two_level())
        with pytest.raises(UnknownIdError):
            register_action_ended(graph, "missing", Agent.HUMAN)

    def test_repetitions_fail_after_limit(self):
        graph = load_graph(doc_two_level(ordered=True))
        first = graph.arcs["h1"].actions[0]
        register_action_ended(graph, first.id, Agent.HUMAN)
        for expected in (1, 2, 3):
            changes = register_action_ended(graph, first.id, Agent.HUMAN)
            assert changes.repetitions == [("h1", expected)]
        with pytest.raises(CooperationFailedError):
            register_action_ended(graph, first.id, Agent.HUMAN)
        # The graph stays inspectable after the failure.
        assert graph.arcs["h1"].repetition_count == 4

    def test_ended_flags_monotone(self):
        graph = load_graph(doc_two_level(ordered=True))
        first = graph.arcs["h1"].actions[0]
        register_action_ended(graph, first.id, Agent.HUMAN)
        assert first.ended
        register_action_ended(graph, first.id, Agent.HUMAN)
        assert first.ended
