"""Gesture model training: cluster-count selection, GMM fit, regression curve.

A model is the expected feature curve over normalized gesture time together
with a per-point covariance, both resampled to a fixed length so the online
cost is independent of how many training trials were recorded.  The number of
Gaussian components is picked by k-means with the silhouette score, the
mixture is fit by expectation-maximization, and the curve comes out of the
mixture by regressing the six feature components on time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_score
from sklearn.mixture import GaussianMixture

from .features import NOMINAL_RATE_HZ, FeatureFrame, frames_to_array

ARCHIVE_VERSION = 1


class TrainingError(Exception):
    """Bad training input or a failed model fit."""


@dataclass
class TrainingConfig:
    curve_length: int = 100           # L, fixed resample length
    k_range: tuple[int, int] = (2, 10)
    em_restarts: int = 5
    em_max_iter: int = 200
    em_tol: float = 1e-6
    cov_floor: float = 1e-6           # eigenvalue clamp
    silhouette_subsample: int = 500
    seed: int = 0
    rate_hz: float = NOMINAL_RATE_HZ
    # Gravity the online filter has settled on when a gesture begins (the
    # wrist is still between gestures).  None seeds from the curve start.
    warm_start_gravity: tuple[float, float, float] | None = (0.0, 0.0, 9.81)


@dataclass
class GestureModel:
    name: str
    curve: np.ndarray          # (L, 6)
    covariances: np.ndarray    # (L, 6, 6) symmetric positive definite
    n_gaussians: int
    length: int                # L
    native_frames: int         # typical gesture duration in samples
    rate_hz: float = NOMINAL_RATE_HZ
    _inv_cov: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def duration(self) -> float:
        return self.native_frames / self.rate_hz

    def inverse_covariances(self) -> np.ndarray:
        if self._inv_cov is None:
            self._inv_cov = np.linalg.inv(self.covariances)
        return self._inv_cov


def train_model(
    name: str,
    trials: list[list[FeatureFrame]],
    config: TrainingConfig | None = None,
) -> GestureModel:
    """Fit one gesture model from feature-frame trials.

    Trials are linearly warped to normalized time [0, 1]; no dynamic time
    warping is attempted.  Requires at least two trials, each at least half
    the curve length.
    """
    cfg = config or TrainingConfig()
    if len(trials) < 2:
        raise TrainingError(f"{name!r}: need at least 2 trials, got {len(trials)}")
    datasets = []
    native_lengths = []
    for k, trial in enumerate(trials):
        if len(trial) < cfg.curve_length // 2:
            raise TrainingError(
                f"{name!r}: trial {k} has {len(trial)} frames, "
                f"need at least {cfg.curve_length // 2}"
            )
        times, feats = frames_to_array(trial)
        span = times[-1] - times[0]
        if span <= 0:
            raise TrainingError(f"{name!r}: trial {k} has zero time span")
        t_norm = (times - times[0]) / span
        datasets.append(np.column_stack([t_norm, feats]))
        native_lengths.append(len(trial))
    data = np.vstack(datasets)
    if np.allclose(data.std(axis=0)[1:], 0.0):
        raise TrainingError(f"{name!r}: degenerate training data, no variation")

    n_gaussians = select_n_gaussians(data, cfg)
    gmm = GaussianMixture(
        n_components=n_gaussians,
        covariance_type="full",
        n_init=cfg.em_restarts,
        max_iter=cfg.em_max_iter,
        tol=cfg.em_tol,
        init_params="k-means++",
        reg_covar=1e-8,
        random_state=cfg.seed,
    ).fit(data)
    if not gmm.converged_:
        raise TrainingError(f"{name!r}: EM did not converge in {cfg.em_max_iter} iterations")

    query = np.linspace(0.0, 1.0, cfg.curve_length)
    curve, covariances = _regress_on_time(gmm, query)
    covariances = _floor_covariances(covariances, cfg.cov_floor)
    native_frames = int(np.median(native_lengths))
    curve = _project_filter_consistent(
        curve, native_frames, cfg.rate_hz, cfg.warm_start_gravity
    )
    return GestureModel(
        name=name,
        curve=curve,
        covariances=covariances,
        n_gaussians=n_gaussians,
        length=cfg.curve_length,
        native_frames=native_frames,
        rate_hz=cfg.rate_hz,
    )


def select_n_gaussians(data: np.ndarray, config: TrainingConfig | None = None) -> int:
    """Component count maximizing the mean silhouette of a k-means clustering.

    Columns are standardized first so the time axis and the feature axes get
    comparable leverage in the clustering.
    """
    cfg = config or TrainingConfig()
    scale = data.std(axis=0)
    scale[scale == 0.0] = 1.0
    z = (data - data.mean(axis=0)) / scale
    lo, hi = cfg.k_range
    hi = min(hi, len(z) - 1)
    best_k, best_score = lo, -np.inf
    for k in range(lo, hi + 1):
        labels = KMeans(n_clusters=k, n_init=10, random_state=cfg.seed).fit_predict(z)
        if len(np.unique(labels)) < 2:
            continue
        score = silhouette_score(
            z,
            labels,
            sample_size=min(cfg.silhouette_subsample, len(z)),
            random_state=cfg.seed,
        )
        if score > best_score:
            best_k, best_score = k, score
    return best_k


def _regress_on_time(gmm: GaussianMixture, query: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Conditional mean and covariance of the six features given time."""
    means = gmm.means_                      # (k, 7)
    covs = gmm.covariances_                 # (k, 7, 7)
    weights = gmm.weights_                  # (k,)
    mt = means[:, 0]
    mf = means[:, 1:]
    ctt = covs[:, 0, 0]
    ctf = covs[:, 0, 1:]                    # (k, 6)
    cff = covs[:, 1:, 1:]                   # (k, 6, 6)

    # Responsibilities of each component at each query time.
    diff = query[:, None] - mt[None, :]     # (L, k)
    log_h = (
        np.log(weights)[None, :]
        - 0.5 * np.log(2.0 * np.pi * ctt)[None, :]
        - 0.5 * diff**2 / ctt[None, :]
    )
    log_h -= log_h.max(axis=1, keepdims=True)
    h = np.exp(log_h)
    h /= h.sum(axis=1, keepdims=True)       # (L, k)

    gain = ctf / ctt[:, None]               # (k, 6)
    cond_mean = mf[None, :, :] + diff[:, :, None] * gain[None, :, :]  # (L, k, 6)
    cond_cov = cff - np.einsum("ki,kj->kij", ctf, ctf) / ctt[:, None, None]  # (k, 6, 6)

    mean = np.einsum("lk,lki->li", h, cond_mean)  # (L, 6)
    spread = cond_mean - mean[:, None, :]         # (L, k, 6)
    cov = np.einsum("lk,kij->lij", h, cond_cov) + np.einsum(
        "lk,lki,lkj->lij", h, spread, spread
    )
    return mean, cov


def _floor_covariances(covariances: np.ndarray, floor: float) -> np.ndarray:
    """Clamp eigenvalues so every covariance stays positive definite."""
    sym = 0.5 * (covariances + np.transpose(covariances, (0, 2, 1)))
    vals, vecs = np.linalg.eigh(sym)
    vals = np.maximum(vals, floor)
    return np.einsum("lij,lj,lkj->lik", vecs, vals, vecs)


def _project_filter_consistent(
    curve: np.ndarray,
    native_frames: int,
    rate_hz: float,
    warm_start: tuple[float, float, float] | None,
) -> np.ndarray:
    """Re-split the regression curve with the online gravity filter.

    Regression smooths gravity and body independently, leaving a curve no raw
    stream could reproduce exactly through the feature pipeline.  Keeping the
    raw sum and re-deriving the split at the gesture's native rate, from the
    filter state a settled wrist would have, makes the curve realizable, so a
    faithful execution can score possibility 1.
    """
    from .features import CUTOFF_HZ  # local import keeps module load order simple

    length = len(curve)
    raw = curve[:, :3] + curve[:, 3:]
    src = np.linspace(0.0, 1.0, length)
    native = np.linspace(0.0, 1.0, native_frames)
    raw_native = np.column_stack(
        [np.interp(native, src, raw[:, c]) for c in range(3)]
    )
    rc = 1.0 / (2.0 * np.pi * CUTOFF_HZ)
    alpha = (1.0 / rate_hz) / (rc + 1.0 / rate_hz)
    state = np.asarray(warm_start, dtype=float) if warm_start is not None else raw_native[0].copy()
    gravity_native = np.empty_like(raw_native)
    for k in range(native_frames):
        state = state + alpha * (raw_native[k] - state)
        gravity_native[k] = state
    body_native = raw_native - gravity_native
    projected = np.empty_like(curve)
    for c in range(3):
        projected[:, c] = np.interp(src, native, gravity_native[:, c])
        projected[:, c + 3] = np.interp(src, native, body_native[:, c])
    return projected


def save_model(model: GestureModel, path: str | Path) -> Path:
    """Write one model archive (.npz, versioned)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "version": ARCHIVE_VERSION,
        "name": model.name,
        "n_gaussians": model.n_gaussians,
        "length": model.length,
        "native_frames": model.native_frames,
        "rate_hz": model.rate_hz,
    }
    np.savez(
        path,
        curve=model.curve,
        covariances=model.covariances,
        meta=np.frombuffer(json.dumps(meta, sort_keys=True).encode(), dtype=np.uint8),
    )
    return path


def load_model(path: str | Path) -> GestureModel:
    with np.load(Path(path)) as archive:
        meta = json.loads(bytes(archive["meta"]).decode())
        if meta.get("version") != ARCHIVE_VERSION:
            raise TrainingError(
                f"unsupported model archive version {meta.get('version')!r} in {path}"
            )
        return GestureModel(
            name=meta["name"],
            curve=archive["curve"],
            covariances=archive["covariances"],
            n_gaussians=meta["n_gaussians"],
            length=meta["length"],
            native_frames=meta["native_frames"],
            rate_hz=meta["rate_hz"],
        )


def load_model_set(directory: str | Path) -> dict[str, GestureModel]:
    """All model archives in a directory, keyed by gesture name."""
    models = {}
    for path in sorted(Path(directory).glob("*.npz")):
        model = load_model(path)
        models[model.name] = model
    if not models:
        raise TrainingError(f"no model archives found in {directory}")
    return models
