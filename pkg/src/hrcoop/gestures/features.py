"""Wrist acceleration features: gravity / body-acceleration split.

Gravity is tracked with a single-pole low-pass filter (0.3 Hz cutoff at the
nominal 40 Hz sample rate); body acceleration is the remainder, so the two
components always sum back to the raw measurement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOMINAL_RATE_HZ = 40.0
CUTOFF_HZ = 0.3


class StreamError(Exception):
    """Empty or non-monotone inertial stream."""


@dataclass(frozen=True)
class InertialSample:
    t: float
    acc: tuple[float, float, float]


@dataclass(frozen=True)
class FeatureFrame:
    t: float
    gravity: tuple[float, float, float]
    body: tuple[float, float, float]


class GravityFilter:
    """Stateful low-pass tracker, seeded with the first sample it sees."""

    def __init__(self, cutoff_hz: float = CUTOFF_HZ):
        self.rc = 1.0 / (2.0 * np.pi * cutoff_hz)
        self._state: np.ndarray | None = None
        self._last_t: float | None = None

    def update(self, sample: InertialSample) -> FeatureFrame:
        acc = np.asarray(sample.acc, dtype=float)
        if self._state is None:
            self._state = acc.copy()
        else:
            if self._last_t is not None and sample.t <= self._last_t:
                raise StreamError(
                    f"non-monotone timestamps: {sample.t} after {self._last_t}"
                )
            dt = sample.t - self._last_t
            alpha = dt / (self.rc + dt)
            self._state = self._state + alpha * (acc - self._state)
        self._last_t = sample.t
        gravity = self._state
        body = acc - gravity
        return FeatureFrame(t=sample.t, gravity=tuple(gravity), body=tuple(body))


def extract_features(stream: list[InertialSample], cutoff_hz: float = CUTOFF_HZ) -> list[FeatureFrame]:
    """Split a whole stream into gravity and body acceleration frames."""
    if not stream:
        raise StreamError("empty inertial stream")
    filt = GravityFilter(cutoff_hz=cutoff_hz)
    return [filt.update(s) for s in stream]


def frames_to_array(frames: list[FeatureFrame]) -> tuple[np.ndarray, np.ndarray]:
    """(times, features) with features stacked as 3 gravity + 3 body columns."""
    times = np.array([f.t for f in frames], dtype=float)
    feats = np.array(
        [[*f.gravity, *f.body] for f in frames], dtype=float
    ).reshape(len(frames), 6)
    return times, feats


def read_stream_csv(path) -> list[InertialSample]:
    """Load a ``t,ax,ay,az`` stream file (header line optional)."""
    import csv
    from pathlib import Path

    samples = []
    with Path(path).open(newline="") as handle:
        for row in csv.reader(handle):
            if not row or not row[0].strip():
                continue
            try:
                values = [float(x) for x in row[:4]]
            except ValueError:
                continue  # header or comment line
            samples.append(InertialSample(t=values[0], acc=tuple(values[1:4])))
    if not samples:
        raise StreamError(f"no samples found in {path}")
    return samples


def write_stream_csv(path, samples: list[InertialSample]) -> None:
    import csv
    from pathlib import Path

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "ax", "ay", "az"])
        for s in samples:
            writer.writerow([f"{s.t:.6f}", *(f"{a:.6f}" for a in s.acc)])
