"""Structured (JSON) documents for verdicts, proofs and models.

Stable keys:

  verdict   {"status": "proved"|"refuted", "formula": str,
             "proof": <proof node>?, "model": <model>?}
  proof     {"sequent": str, "rule": "axiom"|"open"|"L->"|"R->"|"L==1"|
             "L==2"|"L==3", "principal": str?, "principal2": str?,
             "op": "->"|"=="?, "premises": [<proof node>...]}
  model     {"worlds": [str...], "order_pairs": [[str, str]...],
             "valuation": [[formula str, world str, 0|1]...],
             "designated_world": str}

Formulas and sequents are embedded as concrete syntax, so documents are
self-contained and re-parse with the package's own parser.
"""

from __future__ import annotations

import json
from typing import Any

from .calculus import Derivation, RuleInstance, is_axiom
from .formulas import Formula, sort_key
from .parser import parse_formula, parse_sequent
from .printer import format_formula, format_sequent


class DocumentError(ValueError):
    pass


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc


def proof_doc(d: Derivation) -> dict:
    node: dict[str, Any] = {"sequent": format_sequent(d.sequent)}
    if d.rule is None:
        node["rule"] = "axiom" if is_axiom(d.sequent) else "open"
    else:
        node["rule"] = d.rule.rule
        if d.rule.principal is not None:
            node["principal"] = format_formula(d.rule.principal)
        if d.rule.principal2 is not None:
            node["principal2"] = format_formula(d.rule.principal2)
        if d.rule.op is not None:
            node["op"] = d.rule.op
    node["premises"] = [proof_doc(c) for c in d.children]
    return node


def derivation_from_doc(doc: dict) -> Derivation:
    try:
        seq = parse_sequent(doc["sequent"])
        rule_name = doc["rule"]
        premises = doc.get("premises", [])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed proof node: {exc}") from exc
    children = tuple(derivation_from_doc(p) for p in premises)
    if rule_name in ("axiom", "open"):
        if children:
            raise DocumentError("leaf node with premises")
        return Derivation(seq)
    if rule_name not in ("L->", "R->", "L==1", "L==2", "L==3"):
        raise DocumentError(f"unknown rule {rule_name!r}")
    principal = parse_formula(doc["principal"]) if "principal" in doc else None
    principal2 = parse_formula(doc["principal2"]) if "principal2" in doc else None
    op = doc.get("op")
    if op not in (None, "->", "=="):
        raise DocumentError(f"unknown connective {op!r}")
    rule = RuleInstance(rule_name, principal=principal, principal2=principal2, op=op)
    return Derivation(seq, rule, children)


def model_doc(
    worlds: list[str],
    order_pairs: list[tuple[str, str]],
    rows: list[tuple[Formula, str, int]],
    designated: str,
) -> dict:
    world_index = {w: i for i, w in enumerate(worlds)}
    rows_sorted = sorted(rows, key=lambda r: (sort_key(r[0]), world_index[r[1]]))
    return {
        "worlds": list(worlds),
        "order_pairs": [list(p) for p in sorted(order_pairs, key=lambda p: (world_index[p[0]], world_index[p[1]]))],
        "valuation": [[format_formula(f), w, v] for f, w, v in rows_sorted],
        "designated_world": designated,
    }


def model_from_doc(doc: dict):
    """Parse a model document into (KripkeModel, designated world)."""
    from .semantics import KripkeModel

    try:
        worlds = tuple(doc["worlds"])
        pairs = frozenset((a, b) for a, b in doc["order_pairs"])
        designated = doc["designated_world"]
        rows = doc["valuation"]
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed model document: {exc}") from exc
    if not worlds:
        raise DocumentError("model needs at least one world")
    if designated not in worlds:
        raise DocumentError("designated world is not a world")
    valuation: dict[tuple[Formula, str], int] = {}
    for row in rows:
        try:
            text, world, value = row
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"malformed valuation row {row!r}") from exc
        if world not in worlds:
            raise DocumentError(f"valuation row for unknown world {world!r}")
        if value not in (0, 1):
            raise DocumentError(f"valuation value must be 0 or 1, got {value!r}")
        valuation[(parse_formula(text), world)] = value
    for a, b in pairs:
        if a not in worlds or b not in worlds:
            raise DocumentError(f"order pair ({a!r}, {b!r}) outside the world set")
    return KripkeModel(worlds, pairs, valuation), designated


def verdict_doc(formula: Formula, proof: Derivation | None = None, model: dict | None = None) -> dict:
    doc: dict[str, Any] = {
        "status": "proved" if proof is not None else "refuted",
        "formula": format_formula(formula),
    }
    if proof is not None:
        doc["proof"] = proof_doc(proof)
    if model is not None:
        doc["model"] = model
    return doc
