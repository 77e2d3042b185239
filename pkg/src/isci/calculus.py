"""Sequents, the five inference rules, derivation trees and a proof checker.

Rules are applied backward (root first): `apply_rule` maps a conclusion and
a rule instance to the list of premises.  Antecedents are sets, so premises
never duplicate formulas and every rule keeps the conclusion's antecedent
(reading upward, antecedents only grow).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .formulas import (
    BOT,
    Formula,
    Id,
    Imp,
    extended_subformulas,
    in_extended_subformulas,
    sort_key,
    sorted_formulas,
)

L_IMP = "L->"
R_IMP = "R->"
L_ID1 = "L==1"
L_ID2 = "L==2"
L_ID3 = "L==3"

RULE_PRIORITY = {L_ID1: 0, L_ID2: 1, L_ID3: 2, R_IMP: 3, L_IMP: 4}

OP_IMP = "->"
OP_ID = "=="
_OPS = {OP_IMP: Imp, OP_ID: Id}


class InapplicableRuleError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Sequent:
    antecedent: frozenset[Formula]
    succedent: Formula

    def sorted_antecedent(self) -> list[Formula]:
        return sorted_formulas(self.antecedent)

    def with_antecedent(self, *extra: Formula) -> "Sequent":
        return Sequent(self.antecedent.union(extra), self.succedent)


def sequent(antecedent, succedent: Formula) -> Sequent:
    return Sequent(frozenset(antecedent), succedent)


@dataclass(frozen=True, slots=True)
class RuleInstance:
    """A rule tag plus the data that pins down one backward application.

    principal: for L-> the antecedent implication, for L==1 the formula
    whose reflexive equation is introduced, for L==2 the antecedent
    equation, for L==3 the first of the two equations (principal2 the
    second, op the connective used to compose them).
    """

    rule: str
    principal: Formula | None = None
    principal2: Formula | None = None
    op: str | None = None

    def order_key(self):
        return (
            RULE_PRIORITY[self.rule],
            sort_key(self.principal) if self.principal is not None else (),
            sort_key(self.principal2) if self.principal2 is not None else (),
            self.op or "",
        )


def is_axiom(s: Sequent) -> bool:
    """Axioms: the succedent occurs on the left, or falsum does."""
    return s.succedent in s.antecedent or BOT in s.antecedent


def compose_equations(e1: Id, e2: Id, op: str) -> Id:
    ctor = _OPS[op]
    return Id(ctor(e1.left, e2.left), ctor(e1.right, e2.right))


def apply_rule(s: Sequent, r: RuleInstance) -> list[Sequent]:
    """Premises of rule `r` applied backward to `s` (left premise first)."""
    if r.rule == L_IMP:
        p = r.principal
        if not isinstance(p, Imp) or p not in s.antecedent:
            raise InapplicableRuleError(f"L-> needs its implication in the antecedent")
        return [
            Sequent(s.antecedent, p.left),
            s.with_antecedent(p.right),
        ]
    if r.rule == R_IMP:
        succ = s.succedent
        if not isinstance(succ, Imp):
            raise InapplicableRuleError("R-> needs an implication succedent")
        return [Sequent(s.antecedent | {succ.left}, succ.right)]
    if r.rule == L_ID1:
        if r.principal is None:
            raise InapplicableRuleError("L==1 needs the formula to reflect")
        return [s.with_antecedent(Id(r.principal, r.principal))]
    if r.rule == L_ID2:
        e = r.principal
        if not isinstance(e, Id) or e not in s.antecedent:
            raise InapplicableRuleError("L==2 needs its equation in the antecedent")
        return [s.with_antecedent(Imp(e.left, e.right), Imp(e.right, e.left))]
    if r.rule == L_ID3:
        e1, e2 = r.principal, r.principal2
        if (
            not isinstance(e1, Id)
            or not isinstance(e2, Id)
            or e1 not in s.antecedent
            or e2 not in s.antecedent
            or r.op not in _OPS
        ):
            raise InapplicableRuleError("L==3 needs two antecedent equations and a connective")
        return [s.with_antecedent(compose_equations(e1, e2, r.op))]
    raise InapplicableRuleError(f"unknown rule {r.rule!r}")


def applicable_instances(s: Sequent, goal_bound: Formula) -> list[RuleInstance]:
    """All rule instances applicable to `s`, with identity instances
    restricted so the active equation of the premise lies in
    extended_subformulas(goal_bound).  Instances whose premise would equal
    the conclusion (identity no-ops) are dropped.  Order: rule priority,
    then canonical order of the principal data.
    """
    out: list[RuleInstance] = []
    ante = s.antecedent
    eqs = [f for f in s.sorted_antecedent() if isinstance(f, Id)]
    for e in sorted_formulas(extended_subformulas(goal_bound)):
        if isinstance(e, Id) and e.left == e.right and e not in ante:
            out.append(RuleInstance(L_ID1, principal=e.left))
    for e in eqs:
        if Imp(e.left, e.right) not in ante or Imp(e.right, e.left) not in ante:
            out.append(RuleInstance(L_ID2, principal=e))
    for e1 in eqs:
        for e2 in eqs:
            for op in (OP_IMP, OP_ID):
                comp = compose_equations(e1, e2, op)
                if comp not in ante and in_extended_subformulas(comp, goal_bound):
                    out.append(RuleInstance(L_ID3, principal=e1, principal2=e2, op=op))
    if isinstance(s.succedent, Imp):
        out.append(RuleInstance(R_IMP))
    for f in s.sorted_antecedent():
        if isinstance(f, Imp):
            out.append(RuleInstance(L_IMP, principal=f))
    return out


@dataclass(frozen=True, slots=True)
class Derivation:
    """A derivation tree node.  `rule` is None exactly at leaves; a leaf is
    an axiom leaf or an open leaf depending on `is_axiom(sequent)`."""

    sequent: Sequent
    rule: RuleInstance | None = None
    children: tuple["Derivation", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.rule is None

    def walk(self) -> Iterator["Derivation"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def formulas(self) -> frozenset[Formula]:
        out: set[Formula] = set()
        for node in self.walk():
            out |= node.sequent.antecedent
            out.add(node.sequent.succedent)
        return frozenset(out)


def axiom_leaf(s: Sequent) -> Derivation:
    return Derivation(s)


def open_leaf(s: Sequent) -> Derivation:
    return Derivation(s)


@dataclass(frozen=True, slots=True)
class ProofCheckResult:
    ok: bool
    error: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_proof(d: Derivation, claim: Sequent) -> ProofCheckResult:
    """Independent proof checker: the root must be `claim`, every inner
    node's children must be exactly the premises `apply_rule` yields, and
    every leaf must be an axiom.  Shares nothing with the search beyond
    `apply_rule` and `is_axiom`.
    """
    from .printer import format_sequent

    if d.sequent != claim:
        return ProofCheckResult(
            False, f"root is {format_sequent(d.sequent)}, claim is {format_sequent(claim)}"
        )
    stack = [d]
    while stack:
        node = stack.pop()
        if node.rule is None:
            if node.children:
                return ProofCheckResult(
                    False, f"leaf with children at {format_sequent(node.sequent)}"
                )
            if not is_axiom(node.sequent):
                return ProofCheckResult(False, f"open leaf {format_sequent(node.sequent)}")
            continue
        try:
            premises = apply_rule(node.sequent, node.rule)
        except InapplicableRuleError as exc:
            return ProofCheckResult(
                False, f"{node.rule.rule} not applicable at {format_sequent(node.sequent)}: {exc}"
            )
        got = [c.sequent for c in node.children]
        if got != premises:
            return ProofCheckResult(
                False, f"premise mismatch at {format_sequent(node.sequent)} for {node.rule.rule}"
            )
        stack.extend(node.children)
    return ProofCheckResult(True)
