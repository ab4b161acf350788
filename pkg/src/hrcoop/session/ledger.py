"""Timing ledger: per-action timestamps and the session time split.

For every completed action the ledger keeps the suggestion time (when the
planner asked for it), start, recognition/completion and acknowledge times.
From those it computes the reasoning overhead (sum of suggestion-ready minus
previous-acknowledge gaps), the human share (recognition minus suggestion,
plus one extra term per path switch covering the unprompted action), and the
robot share (dispatch-to-completion durations).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ActionStamp:
    key: str                   # arc:action identifier
    name: str
    agent: str                 # "human" | "robot"
    t_next: float              # suggestion/dispatch ready
    t_start: float
    t_rec: float               # recognition instant (completion for robot)
    t_ack: float               # when the planner processed the ending
    t_end: float               # true end when known (reporting only)
    triggered_switch: bool = False

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "name": self.name,
            "agent": self.agent,
            "t_next": self.t_next,
            "t_start": self.t_start,
            "t_rec": self.t_rec,
            "t_ack": self.t_ack,
            "t_end": self.t_end,
            "triggered_switch": self.triggered_switch,
        }


@dataclass
class SwitchStamp:
    action_key: str
    t_start_action: float      # when the switching action began
    t_next_after: float        # when the follow-up suggestion was ready
    from_path: int
    to_path: int

    def to_dict(self) -> dict:
        return {
            "action_key": self.action_key,
            "t_start_action": self.t_start_action,
            "t_next_after": self.t_next_after,
            "from_path": self.from_path,
            "to_path": self.to_path,
        }


@dataclass
class TimingLedger:
    completed: list[ActionStamp] = field(default_factory=list)
    switches: list[SwitchStamp] = field(default_factory=list)

    def record(self, stamp: ActionStamp) -> None:
        self.completed.append(stamp)

    def record_switch(self, stamp: SwitchStamp) -> None:
        self.switches.append(stamp)

    def summary(self, total_time: float) -> dict:
        return compute_metrics(
            [a.to_dict() for a in self.completed],
            [s.to_dict() for s in self.switches],
            total_time,
        )


def compute_metrics(actions: list[dict], switches: list[dict], total_time: float) -> dict:
    """Session time split from raw timestamps.

    ``actions`` must be the completed actions in acknowledge order.  The
    reasoning time sums the n-1 gaps between an action's suggestion and its
    predecessor's acknowledge; the human time adds, per switch, the interval
    from the switching action's start to the next suggestion.
    """
    # Per-term clamping at zero keeps the split well defined when the human
    # acts out of order (buffered or unprompted endings): a suggestion that
    # was ready before the previous acknowledge costs no reasoning wait.
    t_ao = 0.0
    for prev, cur in zip(actions, actions[1:]):
        t_ao += max(0.0, cur["t_next"] - prev["t_ack"])
    # An unprompted action that switched the path is charged through the
    # switch term below (start to follow-up suggestion), not through the
    # suggestion-to-recognition sum: it never had a suggestion of its own.
    t_h_bar = sum(
        max(0.0, a["t_rec"] - a["t_next"])
        for a in actions
        if a["agent"] == "human" and not a.get("triggered_switch")
    )
    t_h = t_h_bar + sum(
        max(0.0, s["t_next_after"] - s["t_start_action"]) for s in switches
    )
    t_r = sum(a["t_ack"] - a["t_start"] for a in actions if a["agent"] == "robot")
    result = {
        "n_actions": len(actions),
        "k_switches": len(switches),
        "t_ao": t_ao,
        "t_h_bar": t_h_bar,
        "t_h": t_h,
        "t_r": t_r,
        "total_time": total_time,
    }
    if total_time > 0:
        result["pct_ao"] = 100.0 * t_ao / total_time
        result["pct_h"] = 100.0 * t_h / total_time
        result["pct_r"] = 100.0 * t_r / total_time
    else:
        result["pct_ao"] = result["pct_h"] = result["pct_r"] = 0.0
    return result
