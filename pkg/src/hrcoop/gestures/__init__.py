from .features import (
    FeatureFrame,
    GravityFilter,
    InertialSample,
    StreamError,
    extract_features,
    frames_to_array,
    read_stream_csv,
    write_stream_csv,
)
from .model import (
    GestureModel,
    TrainingConfig,
    TrainingError,
    load_model,
    load_model_set,
    save_model,
    select_n_gaussians,
    train_model,
)
from .detect import (
    DetectionConfig,
    GestureEvent,
    ModelTrace,
    OnlineRecognizer,
    detect_step,
    possibility,
)
from .synth import (
    TEMPLATE_NAMES,
    gesture_template,
    rest_samples,
    synthesize_gesture_stream,
    template_stream,
)

__all__ = [
    "DetectionConfig",
    "FeatureFrame",
    "GestureEvent",
    "GestureModel",
    "GravityFilter",
    "InertialSample",
    "ModelTrace",
    "OnlineRecognizer",
    "StreamError",
    "TEMPLATE_NAMES",
    "TrainingConfig",
    "TrainingError",
    "detect_step",
    "extract_features",
    "frames_to_array",
    "gesture_template",
    "load_model",
    "load_model_set",
    "possibility",
    "read_stream_csv",
    "rest_samples",
    "save_model",
    "select_n_gaussians",
    "synthesize_gesture_stream",
    "template_stream",
    "train_model",
    "write_stream_csv",
]
