from .base import (
    AlgorithmSpec,
    Model,
    ModelMetadata,
    importance,
    load_model,
    save_model,
)
from .registry import REGISTRY, list_algorithms, make_spec, model_from_jsonable, train, vote_ensemble

__all__ = [
    "AlgorithmSpec",
    "Model",
    "ModelMetadata",
    "REGISTRY",
    "importance",
    "list_algorithms",
    "load_model",
    "make_spec",
    "model_from_jsonable",
    "save_model",
    "train",
    "vote_ensemble",
]
