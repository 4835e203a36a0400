"""Loading and validation for the six dictionary resources behind the features.

Formats follow the resources' conventional public distributions so drop-in
replacement works: one lowercase word per line for the plain lists (``#``
comments allowed), ``word<TAB>score`` for the valence lexicon, and
``word<TAB>category<TAB>0|1`` for the emotion/polarity associations (only
flag=1 lines are kept).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import LexiconError

NRC_CATEGORIES = frozenset(
    {
        "anger",
        "anticipation",
        "disgust",
        "fear",
        "joy",
        "sadness",
        "surprise",
        "trust",
        "positive",
        "negative",
    }
)

LEXICON_FILES = {
    "stop": "stopwords.txt",
    "bad": "badwords.txt",
    "fraud": "fraudwords.txt",
    "bing_pos": "bing_positive.txt",
    "bing_neg": "bing_negative.txt",
    "afinn": "afinn.txt",
    "nrc": "nrc.txt",
}


@dataclass(frozen=True)
class WordList:
    name: str
    words: frozenset[str]

    def __post_init__(self):
        if not self.words:
            raise LexiconError(f"{self.name}: word list is empty")
        for w in self.words:
            if w != w.lower():
                raise LexiconError(f"{self.name}: entry {w!r} is not lowercase")
            if not w or any(ch.isspace() for ch in w):
                raise LexiconError(f"{self.name}: entry {w!r} contains whitespace")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class ScoredLexicon:
    """Word -> integer valence score, every score within [-5, 5]."""

    name: str
    scores: dict[str, int]

    def __post_init__(self):
        for word, score in self.scores.items():
            if not -5 <= score <= 5:
                raise LexiconError(f"{self.name}: score {score} for {word!r} outside [-5, 5]")

    def score(self, word: str) -> int:
        """0 for unknown words; absence is never an error."""
        return self.scores.get(word, 0)

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class CategoryLexicon:
    """Word -> set of emotion/polarity categories."""

    name: str
    categories: dict[str, frozenset[str]]

    def __post_init__(self):
        for word, cats in self.categories.items():
            bad = cats - NRC_CATEGORIES
            if bad:
                raise LexiconError(f"{self.name}: unknown categories {sorted(bad)} for {word!r}")

    def lookup(self, word: str) -> frozenset[str]:
        return self.categories.get(word, frozenset())

    def __len__(self) -> int:
        return len(self.categories)


@dataclass(frozen=True)
class LexiconSet:
    stop: WordList
    bad: WordList
    fraud: WordList
    bing_pos: WordList
    bing_neg: WordList
    afinn: ScoredLexicon
    nrc: CategoryLexicon


@dataclass(frozen=True)
class LexiconReport:
    entry_counts: dict[str, int]
    anomalies: tuple[str, ...] = field(default=())

    @property
    def anomaly_count(self) -> int:
        return len(self.anomalies)

    def to_jsonable(self) -> dict:
        return {"entry_counts": dict(self.entry_counts), "anomalies": list(self.anomalies)}


def default_lexicon_dir() -> Path:
    """Directory of the lexicon files shipped with the package."""
    return Path(resources.files("toxbench").joinpath("data/lexicons"))


def load_lexicon_set(directory=None) -> LexiconSet:
    """Load and validate all seven lexicons from ``directory``.

    Entries are lowercased on load. A missing file, an out-of-range score, an
    unknown category, or a duplicate entry within one file all raise
    LexiconError (duplicates are rejected because the intended entry is
    ambiguous).
    """
    directory = Path(directory) if directory is not None else default_lexicon_dir()
    paths = {}
    for key, fname in LEXICON_FILES.items():
        path = directory / fname
        if not path.is_file():
            raise LexiconError(f"missing lexicon file: {path}")
        paths[key] = path

    return LexiconSet(
        stop=WordList("stop", frozenset(_read_words(paths["stop"]))),
        bad=WordList("bad", frozenset(_read_words(paths["bad"]))),
        fraud=WordList("fraud", frozenset(_read_words(paths["fraud"]))),
        bing_pos=WordList("bing_pos", frozenset(_read_words(paths["bing_pos"]))),
        bing_neg=WordList("bing_neg", frozenset(_read_words(paths["bing_neg"]))),
        afinn=ScoredLexicon("afinn", _read_afinn(paths["afinn"])),
        nrc=CategoryLexicon("nrc", _read_nrc(paths["nrc"])),
    )


def validate(lexicons: LexiconSet) -> LexiconReport:
    """Report entry counts and cross-lexicon anomalies without mutating anything.

    Anomalies are advisory (a word in both Bing polarity lists, a stop word on
    the profanity list, an NRC word tagged both positive and negative); they
    flag suspicious data but are not fatal.
    """
    counts = {
        "stop": len(lexicons.stop),
        "bad": len(lexicons.bad),
        "fraud": len(lexicons.fraud),
        "bing_pos": len(lexicons.bing_pos),
        "bing_neg": len(lexicons.bing_neg),
        "afinn": len(lexicons.afinn),
        "nrc": len(lexicons.nrc),
    }
    anomalies = []
    for word in sorted(lexicons.bing_pos.words & lexicons.bing_neg.words):
        anomalies.append(f"{word!r} appears in both bing_pos and bing_neg")
    for word in sorted(lexicons.stop.words & lexicons.bad.words):
        anomalies.append(f"{word!r} appears in both stop and bad lists")
    for word, cats in sorted(lexicons.nrc.categories.items()):
        if "positive" in cats and "negative" in cats:
            anomalies.append(f"{word!r} carries both positive and negative in nrc")
    return LexiconReport(entry_counts=counts, anomalies=tuple(anomalies))


def _data_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _read_words(path: Path) -> list[str]:
    words, seen = [], set()
    for lineno, line in _data_lines(path):
        word = line.lower()
        if word in seen:
            raise LexiconError(f"{path.name}:{lineno}: duplicate word {word!r}")
        seen.add(word)
        words.append(word)
    return words


def _read_afinn(path: Path) -> dict[str, int]:
    scores: dict[str, int] = {}
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{path.name}:{lineno}: expected 'word<TAB>score', got {line!r}")
        word = parts[0].lower()
        try:
            score = int(parts[1])
        except ValueError:
            raise LexiconError(f"{path.name}:{lineno}: score {parts[1]!r} is not an integer") from None
        if not -5 <= score <= 5:
            raise LexiconError(f"{path.name}:{lineno}: score {score} outside [-5, 5]")
        if word in scores:
            raise LexiconError(f"{path.name}:{lineno}: duplicate word {word!r}")
        scores[word] = score
    return scores


def _read_nrc(path: Path) -> dict[str, frozenset[str]]:
    assoc: dict[str, set[str]] = {}
    seen: set[tuple[str, str]] = set()
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconError(
                f"{path.name}:{lineno}: expected 'word<TAB>category<TAB>0|1', got {line!r}"
            )
        word, category, flag = parts[0].lower(), parts[1].lower(), parts[2]
        if category not in NRC_CATEGORIES:
            raise LexiconError(f"{path.name}:{lineno}: unknown category {category!r}")
        if flag not in ("0", "1"):
            raise LexiconError(f"{path.name}:{lineno}: flag must be 0 or 1, got {flag!r}")
        if (word, category) in seen:
            raise LexiconError(f"{path.name}:{lineno}: duplicate entry {word!r}/{category!r}")
        seen.add((word, category))
        if flag == "1":
            assoc.setdefault(word, set()).add(category)
    return {word: frozenset(cats) for word, cats in assoc.items()}
