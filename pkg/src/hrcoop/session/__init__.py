from .ledger import ActionStamp, TimingLedger, compute_metrics
from .scenario import Scenario, ScenarioError, load_scenario
from .orchestrator import CooperationSession, SessionError, run_scenario

__all__ = [
    "ActionStamp",
    "CooperationSession",
    "Scenario",
    "ScenarioError",
    "SessionError",
    "TimingLedger",
    "compute_metrics",
    "run_scenario",
]
