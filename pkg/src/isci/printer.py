"""Deterministic text, LaTeX and DOT renderers.

`format_formula` emits minimal parentheses for the grammar in `parser`:
`==` binds tighter than `->`, `->` is right-associative, `==` is
non-associative.  Model renderers work on the plain model document
produced by `serialize`, so externally supplied models render the same
way as freshly built ones.
"""

from __future__ import annotations

from .calculus import Derivation, RuleInstance, Sequent, is_axiom
from .formulas import Bottom, Formula, Id, Imp, Var


def format_formula(f: Formula) -> str:
    return _fmt(f, top=True)


def _fmt(f: Formula, top: bool = False, eq_side: bool = False, imp_left: bool = False) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bottom):
        return "#"
    if isinstance(f, Imp):
        body = f"{_fmt(f.left, imp_left=True)} -> {_fmt(f.right)}"
        return f"({body})" if eq_side or imp_left else body
    if isinstance(f, Id):
        body = f"{_fmt(f.left, eq_side=True)} == {_fmt(f.right, eq_side=True)}"
        return f"({body})" if eq_side else body
    raise TypeError(f"not a formula: {f!r}")


def format_sequent(s: Sequent) -> str:
    succ = format_formula(s.succedent)
    if not s.antecedent:
        return f"|- {succ}"
    left = ", ".join(format_formula(f) for f in s.sorted_antecedent())
    return f"{left} |- {succ}"


def rule_label(r: RuleInstance | None, s: Sequent) -> str:
    if r is None:
        return "axiom" if is_axiom(s) else "open"
    parts = [r.rule]
    if r.principal is not None:
        parts.append(format_formula(r.principal))
    if r.principal2 is not None:
        parts.append(format_formula(r.principal2))
    if r.op is not None:
        parts.append(r.op)
    return " ".join(parts)


def format_derivation(d: Derivation) -> str:
    """Indented tree, conclusion first, one sequent per line."""
    lines: list[str] = []

    def walk(node: Derivation, depth: int):
        lines.append(f"{'  ' * depth}{format_sequent(node.sequent)}   [{rule_label(node.rule, node.sequent)}]")
        for child in node.children:
            walk(child, depth + 1)

    walk(d, 0)
    return "\n".join(lines) + "\n"


def latex_formula(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name.replace("_", r"\_")
    if isinstance(f, Bottom):
        return r"\bot"
    if isinstance(f, Imp):
        left = latex_formula(f.left)
        if isinstance(f.left, Imp):
            left = f"({left})"
        right = latex_formula(f.right)
        return f"{left} \\supset {right}"
    if isinstance(f, Id):
        left = latex_formula(f.left)
        if isinstance(f.left, (Imp, Id)):
            left = f"({left})"
        right = latex_formula(f.right)
        if isinstance(f.right, (Imp, Id)):
            right = f"({right})"
        return f"{left} \\equiv {right}"
    raise TypeError(f"not a formula: {f!r}")


def latex_sequent(s: Sequent) -> str:
    left = ", ".join(latex_formula(f) for f in s.sorted_antecedent())
    return f"{left} \\Rightarrow {latex_formula(s.succedent)}"


_LATEX_RULES = {
    "L->": r"L{\supset}",
    "R->": r"R{\supset}",
    "L==1": r"L{\equiv}^1",
    "L==2": r"L{\equiv}^2",
    "L==3": r"L{\equiv}^3",
}


def format_derivation_latex(d: Derivation) -> str:
    """Nested \\infer lines (proof.sty style)."""

    def walk(node: Derivation) -> str:
        if node.rule is None:
            return latex_sequent(node.sequent)
        premises = " & ".join(walk(c) for c in node.children)
        return f"\\infer[{_LATEX_RULES[node.rule.rule]}]{{{latex_sequent(node.sequent)}}}{{{premises}}}"

    return "\\[\n" + walk(d) + "\n\\]\n"


def format_derivation_dot(d: Derivation) -> str:
    lines = ["digraph derivation {", "  rankdir=BT;", '  node [shape=box, fontname="monospace"];']
    counter = 0

    def walk(node: Derivation) -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        label = format_sequent(node.sequent).replace('"', '\\"')
        lines.append(f'  {name} [label="{label}"];')
        for child in node.children:
            cname = walk(child)
            elabel = rule_label(node.rule, node.sequent).replace('"', '\\"')
            lines.append(f'  {cname} -> {name} [label="{elabel}"];')
        return name

    walk(d)
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_model(doc: dict) -> str:
    """Adjacency plus valuation listing for a model document."""
    worlds = doc["worlds"]
    pairs = [(a, b) for a, b in doc["order_pairs"] if a != b]
    lines = [f"worlds: {' '.join(worlds)}"]
    lines.append("order: " + (", ".join(f"{a} <= {b}" for a, b in pairs) if pairs else "(discrete)"))
    lines.append(f"designated: {doc['designated_world']}")
    lines.append("valuation:")
    by_world: dict[str, list[tuple[str, int]]] = {w: [] for w in worlds}
    for formula, world, value in doc["valuation"]:
        by_world[world].append((formula, value))
    for w in worlds:
        entries = ", ".join(f"{f}={v}" for f, v in by_world[w]) or "(all 0)"
        lines.append(f"  {w}: {entries}")
    return "\n".join(lines) + "\n"


def format_model_dot(doc: dict) -> str:
    worlds = doc["worlds"]
    by_world: dict[str, list[str]] = {w: [] for w in worlds}
    for formula, world, value in doc["valuation"]:
        if value:
            by_world[world].append(formula)
    lines = ["digraph countermodel {", "  rankdir=BT;", '  node [shape=box, fontname="monospace"];']
    for w in worlds:
        marker = "*" if w == doc["designated_world"] else ""
        body = "\\n".join([w + marker] + [t.replace('"', '\\"') for t in by_world[w]])
        lines.append(f'  {w} [label="{body}"];')
    for a, b in doc["order_pairs"]:
        if a != b:
            lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
