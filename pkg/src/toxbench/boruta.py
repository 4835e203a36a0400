"""All-relevant feature ranking against permuted shadow features.

Each iteration appends one row-permuted shadow copy per surviving feature,
fits the random forest on real+shadow columns, and scores a "hit" for every
real feature whose importance beats the best shadow. Hits against a fair-coin
null drive the statuses: an exact two-sided binomial test (no normal
approximation; iteration counts are small) confirms or rejects features, and
rejected features leave the design matrix for good.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Dataset
from .errors import ContractError
from .learners import AlgorithmSpec, make_spec, train

CONFIRMED = "Confirmed"
TENTATIVE = "Tentative"
REJECTED = "Rejected"


MIN_SHADOWS = 5  # few surviving features would otherwise leave a weak null


@dataclass(frozen=True)
class BorutaConfig:
    max_iterations: int = 100
    alpha: float = 0.05
    # Depth-capped, leaf-limited trees keep the importance signal crisp (deep
    # memorization lets chance correlations in noise columns shine) and fast.
    forest_spec: AlgorithmSpec = field(
        default_factory=lambda: make_spec("forest", {"n_trees": 100, "max_depth": 7, "min_leaf": 5})
    )
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ContractError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not 0.0 < self.alpha < 1.0:
            raise ContractError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class BorutaReport:
    statuses: dict[str, str]
    hits: dict[str, int]
    history: dict[str, tuple[float, ...]]
    shadow_max_history: tuple[float, ...]
    n_iterations: int

    def median_importances(self) -> dict[str, float]:
        return {
            name: float(np.median(h)) if h else 0.0 for name, h in self.history.items()
        }

    def ranking(self) -> list[tuple[str, float]]:
        """Features sorted by median importance, rank 1 first."""
        medians = self.median_importances()
        return sorted(medians.items(), key=lambda kv: (-kv[1], kv[0]))

    def confirmed(self) -> list[str]:
        return [n for n, s in self.statuses.items() if s == CONFIRMED]

    def rejected(self) -> list[str]:
        return [n for n, s in self.statuses.items() if s == REJECTED]

    def tentative(self) -> list[str]:
        return [n for n, s in self.statuses.items() if s == TENTATIVE]

    def to_jsonable(self) -> dict:
        return {
            "statuses": dict(self.statuses),
            "hits": dict(self.hits),
            "history": {k: list(v) for k, v in self.history.items()},
            "shadow_max_history": list(self.shadow_max_history),
            "n_iterations": self.n_iterations,
            "ranking": [{"feature": f, "median_importance": m} for f, m in self.ranking()],
            "unresolved_tentative": sorted(self.tentative()),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["feature", "status", "median_importance", "rank"])
            for rank, (feature, median) in enumerate(self.ranking(), start=1):
                writer.writerow([feature, self.statuses[feature], repr(median), rank])


def shadow_matrix(X: np.ndarray, rng: np.random.Generator, min_shadows: int = 0) -> np.ndarray:
    """Independently row-permute each column, destroying label association
    while preserving every marginal exactly.

    When fewer than ``min_shadows`` columns are available the real columns
    are recycled round-robin (each copy permuted independently), so the
    max-shadow threshold never degenerates to a one-column lottery.
    """
    n, p = X.shape
    total = max(p, min_shadows)
    shadows = np.empty((n, total), dtype=np.float64)
    for j in range(total):
        shadows[:, j] = X[rng.permutation(n), j % p]
    return shadows


def binomial_tails(hits: int, trials: int) -> tuple[float, float]:
    """Exact P(X >= hits) and P(X <= hits) for X ~ Binomial(trials, 0.5)."""
    scale = 0.5**trials
    upper = sum(math.comb(trials, i) for i in range(hits, trials + 1)) * scale
    lower = sum(math.comb(trials, i) for i in range(0, hits + 1)) * scale
    return upper, lower


def rank_features(dataset: Dataset, config: BorutaConfig | None = None) -> BorutaReport:
    """Run the shadow-comparison loop until every feature is resolved or the
    iteration cap is reached; features still Tentative at the cap stay
    Tentative (no forced resolution) and are flagged in the report."""
    config = config or BorutaConfig()
    names = dataset.feature_names
    if len(names) < 2:
        raise ContractError(f"need >= 2 features, got {len(names)}")
    if len(dataset.classes) < 2:
        raise ContractError(f"need >= 2 classes, got {dataset.classes}")

    statuses = {n: TENTATIVE for n in names}
    hits = {n: 0 for n in names}
    history: dict[str, list[float]] = {n: [] for n in names}
    shadow_max_history: list[float] = []
    active = list(names)  # Confirmed features keep informing the forest.
    name_to_col = {n: i for i, n in enumerate(names)}

    seed_seq = np.random.SeedSequence(config.seed)
    iteration = 0
    for iteration in range(1, config.max_iterations + 1):
        iter_seq = seed_seq.spawn(1)[0]
        rng = np.random.default_rng(iter_seq)
        cols = [name_to_col[n] for n in active]
        real = dataset.X[:, cols]
        shadows = shadow_matrix(real, rng, min_shadows=MIN_SHADOWS)
        shadow_names = [f"shadow_{active[j % len(active)]}_{j}" for j in range(shadows.shape[1])]
        combined = Dataset(list(active) + shadow_names, np.hstack([real, shadows]), dataset.y)
        forest_seed = int(iter_seq.generate_state(1, dtype=np.uint32)[0])
        model = train(config.forest_spec, combined, seed=forest_seed)
        imp = model.feature_importance()
        n_active = len(active)
        shadow_best = float(imp[n_active:].max())
        shadow_max_history.append(shadow_best)
        for i, name in enumerate(active):
            history[name].append(float(imp[i]))
            if imp[i] > shadow_best:
                hits[name] += 1

        # Exact two-sided test at alpha: each tail compared against alpha/2.
        newly_rejected = []
        for name in active:
            if statuses[name] != TENTATIVE:
                continue
            upper, lower = binomial_tails(hits[name], iteration)
            if upper < config.alpha / 2.0:
                statuses[name] = CONFIRMED
            elif lower < config.alpha / 2.0:
                statuses[name] = REJECTED
                newly_rejected.append(name)
        for name in newly_rejected:
            active.remove(name)
        if not any(statuses[n] == TENTATIVE for n in active):
            break
        if len(active) < 1:
            break

    return BorutaReport(
        statuses=statuses,
        hits=hits,
        history={n: tuple(h) for n, h in history.items()},
        shadow_max_history=tuple(shadow_max_history),
        n_iterations=iteration,
    )
