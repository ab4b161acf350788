import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hrcoop.gestures import (
    TEMPLATE_NAMES,
    TrainingConfig,
    extract_features,
    template_stream,
    train_model,
)

TRAINING_NOISE = 0.25
TRIALS_PER_MODEL = 10


def train_default_models():
    """The four screwing-task gesture models, deterministically trained."""
    models = {}
    for name in TEMPLATE_NAMES:
        trials = [
            extract_features(template_stream(name, TRAINING_NOISE, 1000 + i))
            for i in range(TRIALS_PER_MODEL)
        ]
        models[name] = train_model(name, trials, TrainingConfig(seed=0))
    return models


@pytest.fixture(scope="session")
def gesture_models():
    return train_default_models()


@pytest.fixture(scope="session")
def model_dir(gesture_models, tmp_path_factory):
    from hrcoop.gestures import save_model

    directory = tmp_path_factory.mktemp("models")
    for i, model in enumerate(gesture_models.values()):
        save_model(model, directory / f"gesture_{i}.npz")
    return directory
