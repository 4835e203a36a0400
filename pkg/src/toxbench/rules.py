"""Human-readable if-then rules extracted from a fitted CART model.

A rule is the conjunction of split predicates along one root-to-leaf path;
the rule set over all leaves is mutually exclusive and exhaustive, so for any
vector exactly one rule fires and its class equals the tree's prediction.
The ``<=`` comparator always describes the left branch (ties at a threshold
go left), matching the tree learner.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ConsistencyError, ContractError
from .learners import Model
from .learners.trees import CartModel


@dataclass(frozen=True)
class Predicate:
    feature: str
    comparator: str  # "<=" or ">"
    threshold: float

    def holds(self, value: float) -> bool:
        return value <= self.threshold if self.comparator == "<=" else value > self.threshold

    def render(self) -> str:
        return f"{self.feature} {self.comparator} {repr(self.threshold)}"


@dataclass(frozen=True)
class Rule:
    predicates: tuple[Predicate, ...]
    predicted_class: str
    support: int
    purity: float

    def matches(self, values: dict[str, float]) -> bool:
        return all(p.holds(values[p.feature]) for p in self.predicates)

    def render(self) -> str:
        if self.predicates:
            condition = " AND ".join(p.render() for p in self.predicates)
        else:
            condition = "TRUE"
        return (
            f"IF {condition} THEN {self.predicted_class} "
            f"[support={self.support}, purity={repr(self.purity)}]"
        )


@dataclass(frozen=True)
class RuleSet:
    feature_names: tuple[str, ...]
    rules: tuple[Rule, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def render(self) -> str:
        return "\n\n".join(rule.render() for rule in self.rules) + "\n"

    def to_jsonable(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "rules": [
                {
                    "predicates": [
                        {"feature": p.feature, "comparator": p.comparator, "threshold": p.threshold}
                        for p in r.predicates
                    ],
                    "predicted_class": r.predicted_class,
                    "support": r.support,
                    "purity": r.purity,
                }
                for r in self.rules
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())


def extract_rules(model: Model) -> RuleSet:
    """One rule per leaf, predicates in root-to-leaf order, thresholds verbatim."""
    if not isinstance(model, CartModel):
        raise CapabilityError(
            f"rule extraction needs a single decision tree, got {model.algorithm!r}"
        )
    rules: list[Rule] = []
    names = model.feature_names

    def walk(node, path):
        if node.is_leaf():
            winner = int(np.argmax(node.class_counts))
            support = int(round(float(node.n)))
            purity = float(node.class_counts[winner] / node.n)
            rules.append(
                Rule(
                    predicates=tuple(path),
                    predicted_class=model.classes[winner],
                    support=support,
                    purity=purity,
                )
            )
            return
        name = names[node.feature]
        walk(node.left, path + [Predicate(name, "<=", float(node.threshold))])
        walk(node.right, path + [Predicate(name, ">", float(node.threshold))])

    walk(model.root, [])
    return RuleSet(feature_names=names, rules=tuple(rules))


def apply_rules(ruleset: RuleSet, vector) -> str:
    """Evaluate all rules; exactly one must match or extraction was buggy."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (len(ruleset.feature_names),):
        raise ContractError(
            f"vector shape {vector.shape} does not match {len(ruleset.feature_names)} features"
        )
    values = dict(zip(ruleset.feature_names, vector.tolist()))
    matched = [rule for rule in ruleset.rules if rule.matches(values)]
    if len(matched) != 1:
        raise ConsistencyError(
            f"{len(matched)} rules matched; rule sets must be exclusive and exhaustive"
        )
    return matched[0].predicted_class


_RULE_RE = re.compile(
    r"^IF (?P<cond>.+) THEN (?P<cls>\S+) \[support=(?P<support>\d+), purity=(?P<purity>[0-9.eE+-]+)\]$"
)
_PRED_RE = re.compile(r"^(?P<feature>\S+) (?P<cmp><=|>) (?P<thr>[0-9.eE+-]+|inf|-inf)$")


def parse_rules(text: str, feature_names) -> RuleSet:
    """Inverse of ``RuleSet.render``; round-trips exactly."""
    rules = []
    for paragraph in text.strip().split("\n\n"):
        line = paragraph.strip()
        if not line:
            continue
        m = _RULE_RE.match(line)
        if m is None:
            raise ContractError(f"unparseable rule line: {line!r}")
        predicates = []
        if m.group("cond") != "TRUE":
            for clause in m.group("cond").split(" AND "):
                pm = _PRED_RE.match(clause.strip())
                if pm is None:
                    raise ContractError(f"unparseable predicate: {clause!r}")
                predicates.append(
                    Predicate(pm.group("feature"), pm.group("cmp"), float(pm.group("thr")))
                )
        rules.append(
            Rule(
                predicates=tuple(predicates),
                predicted_class=m.group("cls"),
                support=int(m.group("support")),
                purity=float(m.group("purity")),
            )
        )
    return RuleSet(feature_names=tuple(feature_names), rules=tuple(rules))
