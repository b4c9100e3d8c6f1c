"""Kripke models, forcing, model classes and bounded model search."""

from .enumerate import (
    DEFAULT_CAP, Bounds, count_estimate, decompile, enumerate_models, frames,
    iter_compiled, random_model, search_countermodel,
)
from .evaluate import POLARITIES, check_consequence_on_model, evaluate, evaluate_all
from .model import (
    PRESETS, Condition, KripkeModel, ModelClass, Violation, model_class,
    validate_model,
)

__all__ = [
    "DEFAULT_CAP", "Bounds", "count_estimate", "decompile", "enumerate_models", "frames",
    "iter_compiled", "random_model", "search_countermodel",
    "POLARITIES", "check_consequence_on_model", "evaluate", "evaluate_all",
    "PRESETS", "Condition", "KripkeModel", "ModelClass", "Violation", "model_class",
    "validate_model",
]
