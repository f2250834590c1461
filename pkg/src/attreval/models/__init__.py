from .families import (
    LinearModel,
    MlpModel,
    Model,
    ModelError,
    accuracy,
    input_gradient,
    predict_proba,
    predicted_class,
    representation,
    softmax,
)
from .persistence import ModelPersistError, load_model, save_model
from .training import TrainConfig, TrainingError, train_logistic, train_mlp

__all__ = [
    "LinearModel",
    "MlpModel",
    "Model",
    "ModelError",
    "ModelPersistError",
    "TrainConfig",
    "TrainingError",
    "accuracy",
    "input_gradient",
    "load_model",
    "predict_proba",
    "predicted_class",
    "representation",
    "save_model",
    "softmax",
    "train_logistic",
    "train_mlp",
]
