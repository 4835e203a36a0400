"""Regenerate data/lexicons/stopwords.txt from scikit-learn's frozen English
stop list (the Glasgow IR list, 318 words). Run from the repo root:

    python tools/make_stopwords.py
"""

from pathlib import Path

from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

OUT = Path(__file__).resolve().parents[1] / "src/toxbench/data/lexicons/stopwords.txt"

lines = ["# English stop words (scikit-learn's frozen Glasgow IR list)."]
lines += sorted(ENGLISH_STOP_WORDS)
OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
print(f"wrote {len(ENGLISH_STOP_WORDS)} words to {OUT}")
