"""Synthetic wrist-motion streams standing in for a wearable sensor.

Four closed-form gesture templates mimic the screwing-task hand motions; a
template stream is the raw acceleration (gravity posture + body burst) plus
seeded Gaussian noise.  A trained model can also be replayed directly, which
reproduces its own regression curve in feature space.
"""

from __future__ import annotations

import numpy as np

from .features import NOMINAL_RATE_HZ, InertialSample
from .model import GestureModel

REST_GRAVITY = (0.0, 0.0, 9.81)

# Default additive noise used when generating *training* trials.  Deliberately
# larger than sensor noise so the learned covariances absorb the natural
# trial-to-trial spread a human would produce.
TRAINING_NOISE_SIGMA = 0.25


def _bump(t: float, start: float, end: float) -> float:
    """C1 window rising 0 -> 1 -> 0 over [start, end]."""
    if t <= start or t >= end:
        return 0.0
    u = (t - start) / (end - start)
    return float(np.sin(np.pi * u) ** 2)


def _sink_template(t: float, duration: float):
    """Press a bolt down into the countersink: forward pitch, two pushes."""
    tilt = _bump(t, 0.1, duration - 0.1)
    gravity = (2.8 * tilt, 0.6 * tilt, 9.81 - 1.1 * tilt)
    push = _bump(t, 0.2, duration - 0.2) * np.sin(2.0 * np.pi * 1.2 * t)
    body = (0.4 * push, 0.0, -1.8 * push)
    return gravity, body


def _pickup_template(t: float, duration: float):
    """Reach over the table and lift: lateral tilt with one reach lobe."""
    tilt = _bump(t, 0.1, duration)
    gravity = (-0.8 * tilt, 3.2 * tilt, 9.81 - 0.9 * tilt)
    reach = _bump(t, 0.15, 0.6 * duration)
    lift = _bump(t, 0.6 * duration, duration - 0.1)
    body = (2.2 * reach - 0.9 * lift, 0.7 * reach, 1.4 * lift)
    return gravity, body


def _screw_template(t: float, duration: float):
    """Drive the screw: slow wrist roll with a sustained 3 Hz twist."""
    roll = _bump(t, 0.1, duration - 0.1)
    wobble = np.sin(2.0 * np.pi * 0.7 * t)
    gravity = (2.0 * roll * wobble, -1.5 * roll, 9.81 - 0.6 * roll)
    twist = roll * np.sin(2.0 * np.pi * 3.0 * t)
    body = (1.6 * twist, -1.2 * twist, 0.3 * twist)
    return gravity, body


def _putdown_template(t: float, duration: float):
    """Lower the tool and let go: reverse tilt, one descending lobe."""
    tilt = _bump(t, 0.1, duration - 0.05)
    gravity = (-0.5 * tilt, -3.0 * tilt, 9.81 - 0.8 * tilt)
    descend = _bump(t, 0.2, 0.75 * duration)
    body = (-1.1 * descend, 0.5 * descend, -2.0 * descend)
    return gravity, body


_TEMPLATES = {
    "initial bolt sink": (_sink_template, 3.0),
    "bolt or screwdriver pick up": (_pickup_template, 2.5),
    "bolt screw": (_screw_template, 4.0),
    "screwdriver put down": (_putdown_template, 2.5),
}

TEMPLATE_NAMES = tuple(_TEMPLATES)


def gesture_template(name: str):
    """(callable(t) -> (gravity, body), duration) for one canonical gesture."""
    if name not in _TEMPLATES:
        raise KeyError(f"no gesture template named {name!r}")
    func, duration = _TEMPLATES[name]
    return (lambda t: func(t, duration)), duration


def template_stream(
    name: str,
    noise_sigma: float = 0.0,
    rng_seed: int = 0,
    rate_hz: float = NOMINAL_RATE_HZ,
    start_t: float = 0.0,
) -> list[InertialSample]:
    """Raw acceleration samples of one gesture execution."""
    func, duration = gesture_template(name)
    n = int(round(duration * rate_hz)) + 1
    rng = np.random.default_rng(rng_seed)
    noise = rng.normal(0.0, noise_sigma, size=(n, 3)) if noise_sigma > 0 else np.zeros((n, 3))
    samples = []
    for k in range(n):
        t = k / rate_hz
        gravity, body = func(t)
        acc = np.asarray(gravity) + np.asarray(body) + noise[k]
        samples.append(InertialSample(t=start_t + t, acc=tuple(acc)))
    return samples


def synthesize_gesture_stream(
    model: GestureModel,
    noise_sigma: float = 0.0,
    rng_seed: int = 0,
    start_t: float = 0.0,
) -> list[InertialSample]:
    """Stream whose extracted features replay the model curve plus noise."""
    n = model.native_frames
    src = np.linspace(0.0, 1.0, model.length)
    dst = np.linspace(0.0, 1.0, n)
    resampled = np.empty((n, 6))
    for col in range(6):
        resampled[:, col] = np.interp(dst, src, model.curve[:, col])
    rng = np.random.default_rng(rng_seed)
    noise = rng.normal(0.0, noise_sigma, size=(n, 3)) if noise_sigma > 0 else np.zeros((n, 3))
    samples = []
    for k in range(n):
        acc = resampled[k, :3] + resampled[k, 3:] + noise[k]
        samples.append(InertialSample(t=start_t + k / model.rate_hz, acc=tuple(acc)))
    return samples


def rest_samples(
    duration: float,
    rate_hz: float = NOMINAL_RATE_HZ,
    start_t: float = 0.0,
    gravity: tuple[float, float, float] = REST_GRAVITY,
) -> list[InertialSample]:
    """Still-wrist samples used to pad the gaps between gestures."""
    n = int(round(duration * rate_hz))
    return [
        InertialSample(t=start_t + k / rate_hz, acc=gravity) for k in range(n)
    ]
