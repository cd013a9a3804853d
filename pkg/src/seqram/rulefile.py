"""JSON rule files.

A rule file looks like::

    {
      "alternatives": ["A", "B", "D"],
      "utilities": {"A": 8, "B": 6, "D": 7},
      "mode": "renormalize",
      "attention": [
        {"menu": ["A", "B"], "consider": ["A"], "prob": 0.1},
        ...
      ]
    }

Field names are fixed. ``mode`` is optional and defaults to ``renormalize``.
Probabilities are written with ``repr`` precision, so a save/load cycle
reproduces every float bit for bit.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any

from seqram.attention import RENORMALIZE, AttentionRule, load_explicit
from seqram.core import AlternativeUniverse, ChoiceModelError, InputError

FIELDS = ("alternatives", "utilities", "mode", "attention")
ENTRY_FIELDS = ("menu", "consider", "prob")


class RuleFileError(InputError):
    """The document is not a valid rule file."""


# Coffee (A), tea (B) and juice (D) with A > D > B.
BEVERAGE_DOCUMENT: dict[str, Any] = {
    "alternatives": ["A", "B", "D"],
    "utilities": {"A": 8, "B": 6, "D": 7},
    "mode": "renormalize",
    "attention": [
        {"menu": ["A", "B", "D"], "consider": ["A", "B"], "prob": 0.3},
        {"menu": ["A", "B", "D"], "consider": ["B", "D"], "prob": 0.4},
        {"menu": ["A", "B", "D"], "consider": ["A", "D"], "prob": 0.2},
        {"menu": ["A", "B", "D"], "consider": ["A", "B", "D"], "prob": 0.1},
        {"menu": ["A", "B"], "consider": ["A"], "prob": 0.1},
        {"menu": ["A", "B"], "consider": ["B"], "prob": 0.1},
        {"menu": ["A", "B"], "consider": ["A", "B"], "prob": 0.8},
        {"menu": ["A", "D"], "consider": ["A"], "prob": 0.1},
        {"menu": ["A", "D"], "consider": ["D"], "prob": 0.1},
        {"menu": ["A", "D"], "consider": ["A", "D"], "prob": 0.8},
        {"menu": ["B", "D"], "consider": ["B"], "prob": 0.2},
        {"menu": ["B", "D"], "consider": ["D"], "prob": 0.2},
        {"menu": ["B", "D"], "consider": ["B", "D"], "prob": 0.6},
    ],
}


def _labels(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise RuleFileError(f"{where} must be a list of strings")
    return value


def parse_rule_document(doc: Any) -> AttentionRule:
    """Turn a decoded rule document into an :class:`AttentionRule`."""
    if not isinstance(doc, dict):
        raise RuleFileError("rule file must be a JSON object")
    unknown = set(doc) - set(FIELDS)
    if unknown:
        raise RuleFileError(f"unknown fields {sorted(unknown)}")
    for key in ("alternatives", "utilities", "attention"):
        if key not in doc:
            raise RuleFileError(f"missing field {key!r}")
    labels = _labels(doc["alternatives"], "alternatives")
    utilities = doc["utilities"]
    if not isinstance(utilities, dict):
        raise RuleFileError("utilities must be an object")
    for k, v in utilities.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise RuleFileError(f"utility of {k!r} must be a number")
    if not isinstance(doc["attention"], list):
        raise RuleFileError("attention must be a list")
    entries = []
    for i, entry in enumerate(doc["attention"]):
        if not isinstance(entry, dict) or set(entry) != set(ENTRY_FIELDS):
            raise RuleFileError(f"attention[{i}] must have exactly the fields {ENTRY_FIELDS}")
        prob = entry["prob"]
        if isinstance(prob, bool) or not isinstance(prob, (int, float)):
            raise RuleFileError(f"attention[{i}].prob must be a number")
        entries.append(
            (
                _labels(entry["menu"], f"attention[{i}].menu"),
                _labels(entry["consider"], f"attention[{i}].consider"),
                float(prob),
            )
        )
    try:
        universe = AlternativeUniverse(tuple(labels), utilities)
        return load_explicit(entries, universe, doc.get("mode", RENORMALIZE))
    except RuleFileError:
        raise
    except ChoiceModelError as exc:
        raise RuleFileError(str(exc)) from exc


def rule_document(rule: AttentionRule) -> dict[str, Any]:
    """Inverse of :func:`parse_rule_document`."""
    universe = rule.universe
    return {
        "alternatives": list(universe.labels),
        "utilities": dict(universe.utilities),
        "mode": rule.mode,
        "attention": [
            {"menu": list(m), "consider": list(t), "prob": p} for m, t, p in rule.entries()
        ],
    }


def load_rule_file(path: str | Path) -> AttentionRule:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RuleFileError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleFileError(f"{path}: not valid JSON ({exc.msg}, line {exc.lineno})") from exc
    return parse_rule_document(doc)


def dumps_rule(rule: AttentionRule) -> str:
    return json.dumps(rule_document(rule), indent=2) + "\n"


def write_rule_file(rule: AttentionRule, path: str | Path) -> None:
    Path(path).write_text(dumps_rule(rule), encoding="utf-8")


def beverage_rule() -> AttentionRule:
    """The coffee/tea/juice attention rule used by ``reproduce``."""
    return parse_rule_document(copy.deepcopy(BEVERAGE_DOCUMENT))
