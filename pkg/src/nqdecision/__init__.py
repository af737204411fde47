"""Negation quantum decision model for categorization-decision experiments."""

from nqdecision.errors import (
    DatasetNotFoundError,
    DatasetParseError,
    DegenerateInputError,
    NQError,
    NumericError,
    ValidationError,
)
from nqdecision.fit import FitConfig, FitResult, bias_correct, fit, objective
from nqdecision.model import ModelConfig, ModelParams, Prediction, predict

__version__ = "0.1.0"

__all__ = [
    "DatasetNotFoundError",
    "DatasetParseError",
    "DegenerateInputError",
    "FitConfig",
    "FitResult",
    "ModelConfig",
    "ModelParams",
    "NQError",
    "NumericError",
    "Prediction",
    "ValidationError",
    "__version__",
    "bias_correct",
    "fit",
    "objective",
    "predict",
]
