"""toxbench: detect and explain toxic online comments with interpretable features.

Pipeline stages: ingest Jigsaw-format data, extract lexicon/syntax features,
rebalance classes, train a multi-family classifier suite, benchmark it, rank
features all-relevant-style, extract decision rules, and probe models with
text perturbations.
"""

__version__ = "0.1.0"
