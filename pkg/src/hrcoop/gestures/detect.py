"""Possibility-based online gesture detection.

Each gesture model gets a sliding window as long as its own typical duration.
The possibility of a window is exp(-lambda * mean squared Mahalanobis
distance) between the window, resampled to the model length, and the model
curve under the model covariances: 1 exactly on the curve, falling toward 0
as the window departs from it.  A model fires once its trace has passed a
peak, fallen to the 90%-of-peak threshold and is the highest trace around.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .features import FeatureFrame, GravityFilter, InertialSample, frames_to_array
from .model import GestureModel


@dataclass
class DetectionConfig:
    decay: float = 0.5             # lambda in the possibility exponent
    peak_fraction: float = 0.9     # fire at this fraction of the running peak
    min_peak: float = 0.5          # peaks below this never fire
    rearm_level: float = 0.1       # trace level that re-arms after a firing


@dataclass(frozen=True)
class GestureEvent:
    name: str
    t_rec: float
    peak: float


@dataclass
class ModelTrace:
    """Per-model possibility history and detection state."""

    name: str
    values: list[float] = field(default_factory=list)
    times: list[float] = field(default_factory=list)
    peak: float = 0.0
    armed: bool = True
    fired: list[GestureEvent] = field(default_factory=list)

    @property
    def current(self) -> float:
        return self.values[-1] if self.values else 0.0


def possibility(
    window: list[FeatureFrame] | np.ndarray,
    model: GestureModel,
    decay: float = DetectionConfig.decay,
) -> float:
    """Agreement in [0, 1] between a feature window and a gesture model."""
    feats = window if isinstance(window, np.ndarray) else frames_to_array(window)[1]
    if len(feats) < 2:
        raise ValueError("window too short to resample")
    resampled = _resample(feats, model.length)
    dev = resampled - model.curve
    d2 = np.einsum("li,lij,lj->l", dev, model.inverse_covariances(), dev)
    return float(np.exp(-decay * float(d2.mean())))


def _resample(feats: np.ndarray, length: int) -> np.ndarray:
    src = np.linspace(0.0, 1.0, len(feats))
    dst = np.linspace(0.0, 1.0, length)
    out = np.empty((length, feats.shape[1]))
    for col in range(feats.shape[1]):
        out[:, col] = np.interp(dst, src, feats[:, col])
    return out


def detect_step(
    traces: dict[str, ModelTrace],
    t: float,
    config: DetectionConfig | None = None,
) -> GestureEvent | None:
    """Evaluate the newest possibility values; at most one model may fire.

    Firing requires a recorded peak at least ``min_peak`` high, the current
    value at or below ``peak_fraction`` of that peak, and the current value
    not exceeded by any other model.  A fired model stays quiet until its
    trace falls under ``rearm_level``.
    """
    cfg = config or DetectionConfig()
    current = {name: tr.current for name, tr in traces.items()}
    top = max(current.values(), default=0.0)
    for name in sorted(traces):
        trace = traces[name]
        value = current[name]
        if not trace.armed:
            if value < cfg.rearm_level:
                trace.armed = True
                trace.peak = value
            continue
        if value > trace.peak:
            trace.peak = value
            continue
        if (
            trace.peak >= cfg.min_peak
            and value <= cfg.peak_fraction * trace.peak
            and value >= top
        ):
            event = GestureEvent(name=name, t_rec=t, peak=trace.peak)
            trace.fired.append(event)
            trace.armed = False
            trace.peak = 0.0
            return event
    return None


class OnlineRecognizer:
    """Streaming consumer: filter, per-model windows, traces, detections."""

    def __init__(
        self,
        models: dict[str, GestureModel],
        config: DetectionConfig | None = None,
    ):
        if not models:
            raise ValueError("recognizer needs at least one gesture model")
        self.models = dict(sorted(models.items()))
        self.config = config or DetectionConfig()
        self._filter = GravityFilter()
        self._windows: dict[str, deque] = {
            name: deque(maxlen=max(m.native_frames, 2)) for name, m in self.models.items()
        }
        self.traces: dict[str, ModelTrace] = {
            name: ModelTrace(name=name) for name in self.models
        }

    def update(self, sample: InertialSample) -> GestureEvent | None:
        """Feed one raw sample; returns a detection if one fired."""
        frame = self._filter.update(sample)
        feats = np.array([*frame.gravity, *frame.body])
        for name, model in self.models.items():
            window = self._windows[name]
            window.append(feats)
            trace = self.traces[name]
            if len(window) == window.maxlen:
                value = possibility(np.asarray(window), model, self.config.decay)
            else:
                value = 0.0  # window still filling up
            trace.values.append(value)
            trace.times.append(sample.t)
        return detect_step(self.traces, sample.t, self.config)

    def current_possibilities(self) -> dict[str, float]:
        return {name: tr.current for name, tr in self.traces.items()}
