"""Trace persistence: one JSON record per line, flushed per event.

The byte layout is deterministic (sorted keys, fixed separators, no wall
clock anywhere), so identical runs produce identical files.
"""

from __future__ import annotations

import json
from pathlib import Path


class TraceWriter:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = self.path.open("w")

    def write(self, record: dict) -> None:
        self._handle.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
        self._handle.write("\n")
        self._handle.flush()

    def close(self) -> None:
        if not self._handle.closed:
            self._handle.close()


def read_trace(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open() as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def recompute_metrics(path: str | Path) -> tuple[dict, dict]:
    """(in-run metrics, recomputed metrics) from a persisted trace.

    The recomputation re-applies the timing formulas to the raw per-action
    timestamps stored in the final record, so any accumulator drift in the
    live session would show up as a mismatch.
    """
    from .ledger import compute_metrics

    records = read_trace(path)
    end = next((r for r in reversed(records) if r["type"] == "session_end"), None)
    if end is None:
        raise ValueError(f"trace {path} has no session_end record")
    stored = end["metrics"]
    recomputed = compute_metrics(
        end["ledger"]["actions"],
        end["ledger"]["switches"],
        stored["total_time"],
    )
    return stored, recomputed
