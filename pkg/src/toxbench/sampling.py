"""Class rebalancing: uniform under-sampling and replicating over-sampling.

Over-sampling is plain replication with replacement, never synthetic
interpolation; the over-fitting risk under study comes specifically from
duplicated minority rows, so the duplication is kept literal.
"""

from __future__ import annotations

import numpy as np

from .corpus import Dataset
from .errors import ContractError, SamplingError

REBALANCE_MODES = ("under", "over")


def rebalance(dataset: Dataset, mode: str, seed: int) -> Dataset:
    """Equalize class counts.

    ``under``: every class is uniformly sampled without replacement down to
    the minimum class count; surviving rows keep their original order.
    ``over``: all original rows are kept (majority class unchanged) and each
    minority class is padded with rows drawn with replacement until it
    matches the majority count; padding is appended grouped by class.
    """
    if mode not in REBALANCE_MODES:
        raise ContractError(f"mode must be one of {REBALANCE_MODES}, got {mode!r}")
    if len(dataset) == 0:
        raise SamplingError("cannot rebalance an empty dataset")
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(dataset.y):
        by_class.setdefault(label, []).append(i)
    for label in sorted(by_class):
        if not by_class[label]:
            raise SamplingError(f"class {label!r} has no instances")

    rng = np.random.default_rng(seed)
    counts = {label: len(idx) for label, idx in by_class.items()}

    if mode == "under":
        target = min(counts.values())
        keep: set[int] = set()
        for label in sorted(by_class):
            idx = np.array(by_class[label])
            chosen = rng.choice(len(idx), size=target, replace=False)
            keep.update(idx[chosen].tolist())
        return dataset.subset(sorted(keep))

    target = max(counts.values())
    indices = list(range(len(dataset)))
    for label in sorted(by_class):
        idx = np.array(by_class[label])
        deficit = target - len(idx)
        if deficit > 0:
            extra = rng.choice(len(idx), size=deficit, replace=True)
            indices.extend(idx[extra].tolist())
    return dataset.subset(indices)
