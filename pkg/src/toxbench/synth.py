"""Seeded synthetic corpora used by tests, demos and the acceptance suite.

Three generators: a feature-space dataset whose label is a noisy threshold of
one planted column (for feature-selection checks), a balanced seven-class
blob dataset over the default registry names (for learner and benchmark
checks), and a small text corpus where toxicity is carried by one planted
bad word (for end-to-end adversarial checks).
"""

from __future__ import annotations

import numpy as np

from .corpus import ALL_LABELS, Dataset
from .features import DEFAULT_REGISTRY


def planted_feature_dataset(
    n_rows: int = 2000,
    n_noise: int = 3,
    seed: int = 0,
    threshold: float = 2.5,
    flip_rate: float = 0.1,
) -> Dataset:
    """Binary dataset where only ``bad_word_count`` predicts the label.

    The planted column is a small integer count; the label is "toxic" when it
    exceeds ``threshold``, then a ``flip_rate`` fraction of labels is flipped
    at random. The remaining columns are pure standard-normal noise.
    """
    rng = np.random.default_rng(seed)
    planted = rng.integers(0, 6, size=n_rows).astype(np.float64)
    noise = rng.standard_normal((n_rows, n_noise))
    toxic = planted > threshold
    flips = rng.random(n_rows) < flip_rate
    labels = np.where(toxic ^ flips, "toxic", "benign")
    names = ["bad_word_count"] + [f"noise_{i + 1}" for i in range(n_noise)]
    X = np.column_stack([planted, noise])
    return Dataset(names, X, labels.tolist())


def seven_class_dataset(n_per_class: int = 100, seed: int = 0, separation: float = 2.2) -> Dataset:
    """Balanced seven-class Gaussian blobs over the default feature names.

    Class ``k`` is shifted by ``separation`` along informative dimension
    ``k``; everything else is unit noise, so the classes are learnable but
    not trivially separable.
    """
    rng = np.random.default_rng(seed)
    names = DEFAULT_REGISTRY.names
    p = len(names)
    X_parts, y = [], []
    for k, label in enumerate(ALL_LABELS):
        block = rng.standard_normal((n_per_class, p))
        block[:, k % p] += separation
        block[:, (k + 7) % p] += separation / 2.0
        X_parts.append(block)
        y.extend([label] * n_per_class)
    return Dataset(names, np.vstack(X_parts), y)


_SUBJECTS = ("we", "you", "they", "people", "editors", "readers")
_VERBS = ("discuss", "review", "consider", "update", "read", "share")
_OBJECTS = ("the article", "this page", "the topic", "that edit", "the source", "your draft")
_TAILS = ("today", "again", "now", "carefully", "together", "later")


def planted_text_corpus(
    n_per_class: int = 80,
    seed: int = 0,
    bad_word: str = "idiot",
) -> tuple[list[tuple[str, str]], str]:
    """Sentences whose toxicity is carried entirely by one planted bad word.

    Benign rows are neutral template sentences; toxic rows are the same
    templates with the planted word inserted once or twice. Returns
    ``(rows, bad_word)`` where rows are (text, label) pairs.
    """
    rng = np.random.default_rng(seed)

    def sentence() -> str:
        subject = _SUBJECTS[rng.integers(len(_SUBJECTS))]
        verb = _VERBS[rng.integers(len(_VERBS))]
        obj = _OBJECTS[rng.integers(len(_OBJECTS))]
        tail = _TAILS[rng.integers(len(_TAILS))]
        mark = "!" if rng.random() < 0.3 else "."
        return f"{subject.capitalize()} {verb} {obj} {tail}{mark}"

    rows: list[tuple[str, str]] = []
    for _ in range(n_per_class):
        rows.append((sentence(), "benign"))
    for _ in range(n_per_class):
        base = sentence()
        words = base.split()
        insert_at = int(rng.integers(1, len(words)))
        words.insert(insert_at, bad_word)
        if rng.random() < 0.4:
            words.insert(int(rng.integers(1, len(words))), bad_word)
        rows.append((" ".join(words), "toxic"))
    order = rng.permutation(len(rows))
    return [rows[i] for i in order], bad_word
