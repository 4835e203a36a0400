"""Two-stage tokenization and the interpretable feature registry.

Every comment is profiled twice: raw (whitespace tokens, original characters)
for the syntax features, and normalized (lowercased, numbers removed,
punctuation stripped) for the dictionary, sentiment and emotion features.
The split matters: "Time to eat, children" must yield its comma to the
punctuation counter before normalization deletes it.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .corpus import DEFAULT_PRIORITY, Dataset, RawComment, resolve_class
from .errors import ContractError, InsufficientDataError
from .lexicons import LexiconSet

FIRST_PERSON = frozenset({"i", "me", "my", "mine", "myself"})
PLURAL_PRONOUNS = frozenset({"we", "us", "our", "ours", "ourselves"})

_ASCII_ALNUM = frozenset(string.ascii_letters + string.digits)
_ASCII_PUNCT = frozenset(string.punctuation)
_SENTENCE_MARKS = frozenset(".!?")


@dataclass(frozen=True)
class TokenStream:
    raw_text: str
    raw_tokens: tuple[str, ...]
    normalized_tokens: tuple[str, ...]


def tokenize(text: str) -> TokenStream:
    """Whitespace-split raw tokens plus their normalized forms.

    Normalization per raw token: lowercase, drop the token if it contains a
    digit, strip every character that is not a letter or an apostrophe
    (stripping may split a token, e.g. "good/bad" -> "good", "bad"), then trim
    edge apostrophes. Typographic apostrophes are folded to ASCII so
    contractions survive normalization intact.
    """
    raw_tokens = tuple(text.split())
    normalized = []
    for token in raw_tokens:
        token = token.lower().replace("’", "'")
        if any(ch.isdigit() for ch in token):
            continue
        cleaned = "".join(ch if (ch.isalpha() or ch == "'") else " " for ch in token)
        for piece in cleaned.split():
            piece = piece.strip("'")
            if piece:
                normalized.append(piece)
    return TokenStream(raw_text=text, raw_tokens=raw_tokens, normalized_tokens=tuple(normalized))


class _Profile:
    """Per-comment measurements shared by the feature functions."""

    def __init__(self, text: str, lexicons: LexiconSet):
        self.stream = tokenize(text)
        self.lexicons = lexicons
        self.token_counts = Counter(self.stream.normalized_tokens)
        self.word_count = len(self.stream.raw_tokens)
        # Comment length excludes whitespace so that repeating a text with a
        # whitespace junction doubles it exactly, like every other count.
        self.char_count = sum(1 for ch in text if not ch.isspace())

    def list_hits(self, words) -> int:
        return sum(n for w, n in self.token_counts.items() if w in words)

    def nrc_hits(self, category: str) -> int:
        nrc = self.lexicons.nrc
        return sum(n for w, n in self.token_counts.items() if category in nrc.lookup(w))


def _capital_words(p: _Profile) -> float:
    count = 0
    for token in p.stream.raw_tokens:
        letters = "".join(ch for ch in token if ch.isalpha())
        # Length >= 2 excludes the pronoun "I" while catching textual screaming.
        if len(letters) >= 2 and letters.isupper():
            count += 1
    return float(count)


def _sentence_count(text: str) -> float:
    runs, in_run = 0, False
    for ch in text:
        if ch in _SENTENCE_MARKS:
            if not in_run:
                runs += 1
            in_run = True
        else:
            in_run = False
    if runs == 0 and text.strip():
        return 1.0
    return float(runs)


@dataclass(frozen=True)
class FeatureDef:
    name: str
    family: str  # syntax | dictionaries | sentiment | emotion
    fn: Callable[[_Profile], float]
    normalizer: str | None = None


def _default_defs() -> list[FeatureDef]:
    defs = [
        FeatureDef("capital_words", "syntax", _capital_words),
        FeatureDef(
            "capital_words_norm",
            "syntax",
            lambda p: _capital_words(p) / p.word_count if p.word_count else 0.0,
            normalizer="capital_words / word_count (0 when word_count = 0)",
        ),
        FeatureDef("exclamation_count", "syntax", lambda p: float(p.stream.raw_text.count("!"))),
        FeatureDef("question_count", "syntax", lambda p: float(p.stream.raw_text.count("?"))),
        FeatureDef(
            "symbolic_chars",
            "syntax",
            lambda p: float(
                sum(
                    1
                    for ch in p.stream.raw_text
                    if ch not in _ASCII_ALNUM and ch not in _ASCII_PUNCT and not ch.isspace()
                )
            ),
        ),
        FeatureDef(
            "punctuation_count",
            "syntax",
            lambda p: float(sum(1 for ch in p.stream.raw_text if ch in _ASCII_PUNCT)),
        ),
        FeatureDef("word_count", "syntax", lambda p: float(p.word_count)),
        FeatureDef(
            "word_count_norm",
            "syntax",
            lambda p: p.word_count / p.char_count if p.word_count else 0.0,
            normalizer="word_count / char_count (0 when word_count = 0)",
        ),
        FeatureDef("sentence_count", "syntax", lambda p: _sentence_count(p.stream.raw_text)),
        FeatureDef("first_person_count", "syntax", lambda p: float(p.list_hits(FIRST_PERSON))),
        FeatureDef(
            "plural_pronoun_count", "syntax", lambda p: float(p.list_hits(PLURAL_PRONOUNS))
        ),
        FeatureDef("char_count", "syntax", lambda p: float(p.char_count)),
        FeatureDef("stop_word_count", "dictionaries", lambda p: float(p.list_hits(p.lexicons.stop.words))),
        FeatureDef("bad_word_count", "dictionaries", lambda p: float(p.list_hits(p.lexicons.bad.words))),
        FeatureDef("fraud_word_count", "dictionaries", lambda p: float(p.list_hits(p.lexicons.fraud.words))),
        FeatureDef(
            "bing_sentiment",
            "sentiment",
            lambda p: float(p.list_hits(p.lexicons.bing_pos.words) - p.list_hits(p.lexicons.bing_neg.words)),
        ),
        FeatureDef(
            "afinn_sentiment",
            "sentiment",
            lambda p: float(
                sum(p.lexicons.afinn.score(w) * n for w, n in p.token_counts.items())
            ),
        ),
        FeatureDef("nrc_negative", "sentiment", lambda p: float(p.nrc_hits("negative"))),
        FeatureDef("nrc_positive", "sentiment", lambda p: float(p.nrc_hits("positive"))),
    ]
    for emotion in ("anger", "anticipation", "disgust", "fear", "joy", "trust", "sadness", "surprise"):
        defs.append(
            FeatureDef(emotion, "emotion", lambda p, e=emotion: float(p.nrc_hits(e)))
        )
    return defs


class FeatureRegistry:
    """Ordered, named feature slots; every extracted vector follows this order.

    The default registry holds 27 features. It is extensible (``extended``)
    so additional slots never require touching the extraction code.
    """

    def __init__(self, defs):
        defs = tuple(defs)
        names = [d.name for d in defs]
        if len(set(names)) != len(names):
            raise ContractError("duplicate feature names in registry")
        self.defs = defs
        self.names = tuple(names)
        self.families = tuple(d.family for d in defs)

    def __len__(self) -> int:
        return len(self.defs)

    def extended(self, extra_defs) -> "FeatureRegistry":
        return FeatureRegistry(self.defs + tuple(extra_defs))

    def extract(self, text: str, lexicons: LexiconSet) -> np.ndarray:
        profile = _Profile(text, lexicons)
        values = np.array([d.fn(profile) for d in self.defs], dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ContractError(f"non-finite feature value for text {text[:40]!r}")
        return values

    def extract_named(self, text: str, lexicons: LexiconSet) -> dict[str, float]:
        return dict(zip(self.names, self.extract(text, lexicons)))

    def schema(self) -> dict:
        return {
            "features": [
                {"name": d.name, "family": d.family, "normalizer": d.normalizer}
                for d in self.defs
            ]
        }


DEFAULT_REGISTRY = FeatureRegistry(_default_defs())


def extract(text: str, lexicons: LexiconSet, registry: FeatureRegistry = DEFAULT_REGISTRY) -> np.ndarray:
    """Feature vector for one comment, ordered per the registry."""
    return registry.extract(text, lexicons)


def extract_dataset(
    comments,
    lexicons: LexiconSet,
    registry: FeatureRegistry = DEFAULT_REGISTRY,
    priority=DEFAULT_PRIORITY,
    labels=None,
) -> Dataset:
    """Extract a Dataset from RawComments (or from (text, label) pairs).

    When ``labels`` is given it overrides class resolution and must align
    with ``comments``.
    """
    comments = list(comments)
    X = np.empty((len(comments), len(registry)), dtype=np.float64)
    y = []
    for i, item in enumerate(comments):
        if isinstance(item, RawComment):
            text = item.text
            label = labels[i] if labels is not None else resolve_class(item.flags, priority)
        else:
            text, label = item[0], (labels[i] if labels is not None else item[1])
        X[i] = registry.extract(text, lexicons)
        y.append(label)
    return Dataset(registry.names, X, y)


@dataclass(frozen=True)
class CorrelationResult:
    feature_names: tuple[str, ...]
    matrix: np.ndarray
    constant_features: tuple[str, ...]


def correlation_matrix(dataset: Dataset) -> CorrelationResult:
    """Pearson correlation between all feature pairs.

    Constant features cannot be correlated; their entries (including the
    diagonal) are the 0.0 sentinel and the feature is flagged.
    """
    if len(dataset) < 2:
        raise InsufficientDataError(f"need >= 2 instances, got {len(dataset)}")
    X = dataset.X
    std = X.std(axis=0)
    if not np.any(std > 0):
        raise InsufficientDataError("every feature is constant; nothing to correlate")
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / len(dataset)
    denom = np.outer(std, std)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    constant = std == 0
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    names = dataset.feature_names
    return CorrelationResult(
        feature_names=names,
        matrix=corr,
        constant_features=tuple(n for n, c in zip(names, constant) if c),
    )
