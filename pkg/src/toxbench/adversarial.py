"""Text perturbation operators and the probability-shift probe.

The operators mirror classic word-level attacks on toxicity scorers: drop a
keyword, negate it, swap the subject phrase, repeat the text, shift pronouns,
or append an exclamation. Word operators match on token boundaries
(case-insensitive), phrase operators on raw substrings, because that is how
the feature extractor will perceive the edit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .features import DEFAULT_REGISTRY, FeatureRegistry
from .lexicons import LexiconSet
from .learners import Model


def _word_pattern(word: str) -> re.Pattern:
    return re.compile(rf"\b{re.escape(word)}\b", re.IGNORECASE)


class PerturbOp:
    """Total text -> text rewrite; returns the new text and whether it matched."""

    def apply(self, text: str) -> tuple[str, bool]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class DeleteToken(PerturbOp):
    word: str

    def __post_init__(self):
        if not self.word:
            raise ContractError("DeleteToken needs a non-empty word")

    def apply(self, text: str) -> tuple[str, bool]:
        m = _word_pattern(self.word).search(text)
        if m is None:
            return text, False
        s, e = m.span()
        # Swallow one adjacent whitespace so token counts drop cleanly.
        if e < len(text) and text[e].isspace():
            e += 1
        elif s > 0 and text[s - 1].isspace():
            s -= 1
        return text[:s] + text[e:], True

    def describe(self) -> str:
        return f"delete_token({self.word!r})"


@dataclass(frozen=True)
class NegateBefore(PerturbOp):
    """Insert "don't" before the first occurrence of the word."""

    word: str

    def __post_init__(self):
        if not self.word:
            raise ContractError("NegateBefore needs a non-empty word")

    def apply(self, text: str) -> tuple[str, bool]:
        m = _word_pattern(self.word).search(text)
        if m is None:
            return text, False
        return text[: m.start()] + "don't " + text[m.start() :], True

    def describe(self) -> str:
        return f"negate_before({self.word!r})"


@dataclass(frozen=True)
class ReplaceSpan(PerturbOp):
    from_phrase: str
    to_phrase: str

    def __post_init__(self):
        if not self.from_phrase or not self.to_phrase:
            raise ContractError("ReplaceSpan needs non-empty phrases")

    def apply(self, text: str) -> tuple[str, bool]:
        pattern = re.compile(re.escape(self.from_phrase), re.IGNORECASE)
        replaced, count = pattern.subn(lambda _: self.to_phrase, text)
        return (replaced, True) if count else (text, False)

    def describe(self) -> str:
        return f"replace_span({self.from_phrase!r} -> {self.to_phrase!r})"


@dataclass(frozen=True)
class RepeatTwice(PerturbOp):
    def apply(self, text: str) -> tuple[str, bool]:
        if not text:
            return text, False
        return f"{text} {text}", True

    def describe(self) -> str:
        return "repeat_twice"


@dataclass(frozen=True)
class PronounShift(PerturbOp):
    from_words: tuple[str, ...]
    to_word: str

    def __post_init__(self):
        if not self.from_words or not all(self.from_words) or not self.to_word:
            raise ContractError("PronounShift needs non-empty pronoun sets")

    def apply(self, text: str) -> tuple[str, bool]:
        changed = False
        for word in self.from_words:
            text, count = _word_pattern(word).subn(self.to_word, text)
            changed = changed or count > 0
        return text, changed

    def describe(self) -> str:
        return f"pronoun_shift({list(self.from_words)} -> {self.to_word!r})"


@dataclass(frozen=True)
class AppendExclamation(PerturbOp):
    def apply(self, text: str) -> tuple[str, bool]:
        return text + "!", True

    def describe(self) -> str:
        return "append_exclamation"


def apply_op(text: str, op: PerturbOp) -> str:
    """Pure rewrite; inputs with no match come back unchanged."""
    return op.apply(text)[0]


@dataclass(frozen=True)
class ProbeRow:
    op: str
    text: str
    matched: bool
    probabilities: tuple[float, ...]
    deltas: tuple[float, ...]
    flipped: bool
    feature_diff: dict[str, tuple[float, float]]

    def to_jsonable(self) -> dict:
        return {
            "op": self.op,
            "text": self.text,
            "matched": self.matched,
            "probabilities": list(self.probabilities),
            "deltas": list(self.deltas),
            "flipped": self.flipped,
            "feature_diff": {k: list(v) for k, v in self.feature_diff.items()},
        }


@dataclass(frozen=True)
class ProbeReport:
    classes: tuple[str, ...]
    original_text: str
    original_probabilities: tuple[float, ...]
    original_label: str
    rows: tuple[ProbeRow, ...] = field(default=())

    def to_jsonable(self) -> dict:
        return {
            "classes": list(self.classes),
            "original_text": self.original_text,
            "original_probabilities": list(self.original_probabilities),
            "original_label": self.original_label,
            "rows": [r.to_jsonable() for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())

    def render_table(self, max_text: int = 48) -> str:
        def clip(s: str) -> str:
            return s if len(s) <= max_text else s[: max_text - 1] + "…"

        header = ["variant", "text"] + [f"p({c})" for c in self.classes] + ["flip"]
        lines = ["\t".join(header)]
        probs = "\t".join(f"{p:.4f}" for p in self.original_probabilities)
        lines.append(f"original\t{clip(self.original_text)}\t{probs}\t-")
        for row in self.rows:
            probs = "\t".join(
                f"{p:.4f} ({d:+.4f})" for p, d in zip(row.probabilities, row.deltas)
            )
            flag = "FLIP" if row.flipped else ("-" if row.matched else "no-op")
            lines.append(f"{row.op}\t{clip(row.text)}\t{probs}\t{flag}")
        return "\n".join(lines) + "\n"


def probe(
    model: Model,
    lexicons: LexiconSet,
    text: str,
    ops,
    registry: FeatureRegistry = DEFAULT_REGISTRY,
) -> ProbeReport:
    """Score the original and each perturbed variant; never mutates the model."""
    if tuple(model.feature_names) != tuple(registry.names):
        raise ContractError(
            "model was not trained on this feature registry "
            f"({len(model.feature_names)} vs {len(registry.names)} slots)"
        )
    base_vec = registry.extract(text, lexicons)
    base_proba = model.predict_proba(base_vec)[0]
    base_label = model.classes[int(np.argmax(base_proba))]
    rows = []
    for op in ops:
        new_text, matched = op.apply(text)
        vec = registry.extract(new_text, lexicons)
        proba = model.predict_proba(vec)[0]
        deltas = proba - base_proba
        label = model.classes[int(np.argmax(proba))]
        diff = {
            name: (float(b), float(a))
            for name, b, a in zip(registry.names, base_vec, vec)
            if a != b
        }
        rows.append(
            ProbeRow(
                op=op.describe(),
                text=new_text,
                matched=matched,
                probabilities=tuple(proba.tolist()),
                deltas=tuple(deltas.tolist()),
                flipped=label != base_label,
                feature_diff=diff,
            )
        )
    return ProbeReport(
        classes=model.classes,
        original_text=text,
        original_probabilities=tuple(base_proba.tolist()),
        original_label=base_label,
        rows=tuple(rows),
    )
