"""Algorithm registry, the uniform ``train`` entry point, and soft voting.

Defaults are explicit because published library defaults drift: anyone
re-running the suite sees exactly which knobs produced a number.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..corpus import Dataset
from ..errors import ContractError
from .base import AlgorithmSpec, Model, ModelMetadata
from .baseline import MajorityModel
from .bayes import GaussianNBModel, LDAModel
from .linear import LinearSvmModel, LogisticModel
from .neighbors import KnnModel
from .neural import MlpModel
from .trees import AdaBoostModel, CartModel, ForestModel


@dataclass(frozen=True)
class RegistryEntry:
    family: str
    cls: type
    defaults: dict


REGISTRY: dict[str, RegistryEntry] = {
    "majority": RegistryEntry("baseline", MajorityModel, {}),
    "cart": RegistryEntry("tree", CartModel, {"max_depth": 30, "min_leaf": 5}),
    "forest": RegistryEntry(
        "forest",
        ForestModel,
        {"n_trees": 500, "max_features": "sqrt", "max_depth": None, "min_leaf": 1},
    ),
    "adaboost": RegistryEntry("boosting", AdaBoostModel, {"n_rounds": 100, "max_depth": 2}),
    "gnb": RegistryEntry("bayes", GaussianNBModel, {"var_smoothing": 1e-9}),
    "lda": RegistryEntry("discriminant", LDAModel, {"ridge": 0.0}),
    "logit": RegistryEntry(
        "linear", LogisticModel, {"epochs": 500, "lr": 0.1, "l2": 1e-4, "tol": 1e-6}
    ),
    "knn": RegistryEntry("instance", KnnModel, {"k": 5}),
    "svm": RegistryEntry(
        "svm", LinearSvmModel, {"epochs": 500, "lr": 0.1, "l2": 1e-4, "tol": 1e-6}
    ),
    "mlp": RegistryEntry(
        "neural",
        MlpModel,
        {"hidden": 16, "epochs": 500, "lr": 0.1, "l2": 1e-4, "tol": 1e-6},
    ),
}


def list_algorithms() -> list[dict]:
    return [
        {"name": name, "family": entry.family, "defaults": dict(entry.defaults)}
        for name, entry in sorted(REGISTRY.items())
    ]


def make_spec(name: str, hyperparameters: dict | None = None) -> AlgorithmSpec:
    if name not in REGISTRY:
        raise ContractError(f"unknown algorithm {name!r}; choices: {sorted(REGISTRY)}")
    return AlgorithmSpec(name=name, family=REGISTRY[name].family, hyperparameters=hyperparameters or {})


def train(spec, dataset: Dataset, seed: int) -> Model:
    """Fit one registry algorithm; wall time is recorded around the fit only."""
    if isinstance(spec, str):
        spec = make_spec(spec)
    if spec.name not in REGISTRY:
        raise ContractError(f"unknown algorithm {spec.name!r}; choices: {sorted(REGISTRY)}")
    entry = REGISTRY[spec.name]
    if spec.family != entry.family:
        raise ContractError(
            f"{spec.name}: family must be {entry.family!r}, got {spec.family!r}"
        )
    params = spec.resolved(entry.defaults)
    if len(dataset) == 0:
        raise ContractError("cannot train on an empty dataset")
    if entry.family != "baseline" and len(dataset.classes) < 2:
        raise ContractError(f"{spec.name} needs at least 2 classes, got {dataset.classes}")

    metadata = ModelMetadata(seed=seed, n_instances=len(dataset))
    model = entry.cls(spec=spec, classes=dataset.classes, feature_names=dataset.feature_names, metadata=metadata)
    start = time.perf_counter()
    model._fit(dataset.X, dataset.y, seed, params)
    metadata.fit_seconds = time.perf_counter() - start
    return model


def vote_ensemble(models, X) -> np.ndarray:
    """Unweighted mean of member probability distributions.

    Members must agree on class list and feature dimensionality. Accepts a
    single vector or a matrix; the result matches the input arity.
    """
    models = list(models)
    if not models:
        raise ContractError("ensemble needs at least one model")
    first = models[0]
    for m in models[1:]:
        if m.classes != first.classes:
            raise ContractError(f"class list mismatch: {m.classes} vs {first.classes}")
        if m.n_features != first.n_features:
            raise ContractError("feature dimensionality mismatch across members")
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    P = np.mean([m.predict_proba(X) for m in models], axis=0)
    return P[0] if single else P


def model_from_jsonable(raw: dict) -> Model:
    if raw.get("format") != "toxbench-model":
        raise ContractError(f"not a model file (format={raw.get('format')!r})")
    name = raw["algorithm"]
    if name not in REGISTRY:
        raise ContractError(f"model file names unknown algorithm {name!r}")
    entry = REGISTRY[name]
    spec = AlgorithmSpec(name=name, family=entry.family, hyperparameters=dict(raw["hyperparameters"]))
    model = entry.cls(
        spec=spec,
        classes=raw["classes"],
        feature_names=raw["feature_names"],
        metadata=ModelMetadata.from_jsonable(raw["metadata"]),
    )
    model._load_params(raw["parameters"])
    return model
