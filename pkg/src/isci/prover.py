"""Backward proof search.

Priorities at every node: close axioms, saturate with the identity rules,
then apply R-> when the succedent is an implication (R-> is invertible,
so it is never backtracked), and only then try the antecedent implications
with L->, backtracking across the choices.  A rule application is skipped
whenever one of its premises would repeat a sequent already on the branch;
together with the extended-subformula bound on identity rules this makes
the search space finite.

Identity saturation comes in two modes, chosen per goal:

* full: every reflexive equation in the extended-subformula set is
  introduced and every pair of antecedent equations is composed.  Used
  whenever the extended-subformula set materializes within EXSUB_CAP
  formulas; this is the exhaustive reading of saturation.
* guided: for goals whose extended-subformula set is too large to
  enumerate, reflexive equations are introduced only for formulas that
  occur inside the sequent, and compositions are kept only when the
  composed equation itself occurs inside the sequent.  Saturation then
  touches just the identities that can interact with the goal, which
  keeps large instances tractable.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from functools import lru_cache

from .calculus import (
    L_ID1,
    L_ID2,
    L_ID3,
    L_IMP,
    OP_ID,
    OP_IMP,
    R_IMP,
    Derivation,
    RuleInstance,
    Sequent,
    apply_rule,
    check_proof,
    compose_equations,
    is_axiom,
)
from .formulas import (
    Formula,
    Id,
    Imp,
    extended_subformulas_within,
    in_extended_subformulas,
    sorted_formulas,
    sub_closure,
)
from .invariants import assert_restricted_derivation

EXSUB_CAP = 256


@dataclass(frozen=True, slots=True)
class Limits:
    max_nodes: int = 1_000_000
    timeout: float = 30.0


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0


@dataclass(frozen=True, slots=True)
class Verdict:
    proved: bool
    proof: Derivation | None
    stats: SearchStats


class ResourceExhausted(RuntimeError):
    """Raised when a resource cap is hit; distinct from a NotProved verdict."""


@lru_cache(maxsize=None)
def saturation_plan(goal: Formula) -> frozenset[Formula] | None:
    """The materialized extended-subformula set, or None for guided mode."""
    return extended_subformulas_within(goal, EXSUB_CAP)


@lru_cache(maxsize=None)
def _reflexive_members(goal: Formula) -> tuple[Id, ...]:
    plan = saturation_plan(goal)
    assert plan is not None
    return tuple(
        e for e in sorted_formulas(plan) if isinstance(e, Id) and e.left == e.right
    )


@lru_cache(maxsize=1 << 18)
def identity_instance(s: Sequent, goal: Formula) -> RuleInstance | None:
    """Canonically least identity-rule instance applicable to `s` under the
    goal's saturation mode, or None at the saturation fixpoint.

    In guided mode a composition is kept when either of its sides already
    occurs inside the sequent: an identity between mentioned formulas can
    feed an axiom or an implication split, one between two unmentioned
    formulas cannot."""
    plan = saturation_plan(goal)
    ante = s.antecedent
    material = None
    if plan is None:
        material = sub_closure(ante | {s.succedent})
        for x in sorted_formulas(material):
            e = Id(x, x)
            if e not in ante and in_extended_subformulas(e, goal):
                return RuleInstance(L_ID1, principal=x)
    else:
        for e in _reflexive_members(goal):
            if e not in ante:
                return RuleInstance(L_ID1, principal=e.left)
    eqs = [f for f in s.sorted_antecedent() if isinstance(f, Id)]
    for e in eqs:
        if Imp(e.left, e.right) not in ante or Imp(e.right, e.left) not in ante:
            return RuleInstance(L_ID2, principal=e)
    for e1 in eqs:
        for e2 in eqs:
            for op in (OP_IMP, OP_ID):
                comp = compose_equations(e1, e2, op)
                if comp in ante:
                    continue
                if plan is not None:
                    if comp in plan:
                        return RuleInstance(L_ID3, principal=e1, principal2=e2, op=op)
                elif (
                    comp.left in material or comp.right in material
                ) and in_extended_subformulas(comp, goal):
                    return RuleInstance(L_ID3, principal=e1, principal2=e2, op=op)
    return None


def saturate_identities(
    s: Sequent, goal: Formula, history: frozenset[Sequent] = frozenset()
) -> list[tuple[RuleInstance, Sequent]]:
    """Identity-rule chain from `s` to its saturation fixpoint, stopping
    early if an axiom shows up.  Each step strictly enlarges the
    antecedent, so it can never recreate a sequent from `history`."""
    chain: list[tuple[RuleInstance, Sequent]] = []
    current = s
    seen = set(history)
    seen.add(current)
    while not is_axiom(current):
        inst = identity_instance(current, goal)
        if inst is None:
            break
        nxt = apply_rule(current, inst)[0]
        assert nxt not in seen, "identity step repeated a sequent"
        seen.add(nxt)
        chain.append((inst, nxt))
        current = nxt
    return chain


class _ProofSearch:
    """Depth-first backward search with conflict-directed failure caching.

    A rule application is blocked exactly when a premise would repeat a
    sequent on the branch, so enlarging the blocking set only removes
    options and failure is monotone: if a sequent's subtree failed while
    relying on blockers B (the branch sequents that actually suppressed
    an application somewhere inside), it fails again under any blocking
    set containing B.  Each failure caches its blocker set, and later
    visits whose branch dominates a cached set are cut off.  Monotonicity
    is also why a failed R-> premise falls back to the L-> alternatives
    instead of committing; R-> is still tried first, so proofs keep the
    invertible-rule-first shape.
    """

    def __init__(self, goal: Formula, limits: Limits):
        self.goal = goal
        self.limits = limits
        self.stats = SearchStats()
        self.deadline = time.monotonic() + limits.timeout
        self.failed: dict[Sequent, list[frozenset[Sequent]]] = {}

    def tick(self):
        self.stats.nodes += 1
        if self.stats.nodes > self.limits.max_nodes:
            raise ResourceExhausted(f"node cap {self.limits.max_nodes} hit")
        if time.monotonic() > self.deadline:
            raise ResourceExhausted(f"timeout {self.limits.timeout}s hit")

    def expand(self, seq: Sequent, history: frozenset[Sequent]):
        """Returns (proof tree or None, blockers the outcome relied on)."""
        self.tick()
        if is_axiom(seq):
            return Derivation(seq), set()
        hist = history | {seq}
        for entry in self.failed.get(seq, ()):
            if entry <= hist:
                return None, set(entry)
        used: set[Sequent] = set()
        result = self._expand_inner(seq, hist, used)
        if result is None:
            entry = frozenset(u for u in used if u in hist)
            entries = self.failed.setdefault(seq, [])
            entries[:] = [e for e in entries if not entry <= e]
            entries.append(entry)
        return result, used

    def _expand_inner(self, seq, hist, used) -> Derivation | None:
        # identity saturation first, built iteratively (chains can be long)
        chain: list[tuple[Sequent, RuleInstance]] = []
        current = seq
        while not is_axiom(current):
            inst = identity_instance(current, self.goal)
            if inst is None:
                break
            chain.append((current, inst))
            current = apply_rule(current, inst)[0]
            hist = hist | {current}
            self.tick()
        if is_axiom(current):
            result = Derivation(current)
        else:
            result = self._tail(current, hist, used)
        if result is None:
            return None
        for conclusion, inst in reversed(chain):
            result = Derivation(conclusion, inst, (result,))
        return result

    def _tail(self, seq, hist, used) -> Derivation | None:
        """R-> first, then the L-> alternatives; `seq` is saturated."""
        if isinstance(seq.succedent, Imp):
            r = RuleInstance(R_IMP)
            premise = apply_rule(seq, r)[0]
            if premise not in hist:
                child, sub = self.expand(premise, hist)
                if child is not None:
                    return Derivation(seq, r, (child,))
                used |= sub
                self.stats.backtracks += 1
            else:
                used.add(premise)
        for f in seq.sorted_antecedent():
            if not isinstance(f, Imp) or f.left == f.right:
                # self-implications are tautologies; applying L-> to one is
                # a cut that only widens the search
                continue
            inst = RuleInstance(L_IMP, principal=f)
            left, right = apply_rule(seq, inst)
            if left in hist:
                used.add(left)
                continue
            if right in hist:
                used.add(right)
                continue
            lchild, sub = self.expand(left, hist)
            if lchild is None:
                used |= sub
                self.stats.backtracks += 1
                continue
            rchild, sub = self.expand(right, hist)
            if rchild is None:
                used |= sub
                self.stats.backtracks += 1
                continue
            return Derivation(seq, inst, (lchild, rchild))
        return None


def prove(phi: Formula, limits: Limits | None = None) -> Verdict:
    """Decide provability of the sequent with empty antecedent and
    succedent `phi`.  Proved verdicts carry a derivation that passes the
    independent checker; NotProved means the whole restricted search space
    was exhausted."""
    limits = limits or Limits()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    search = _ProofSearch(phi, limits)
    root = Sequent(frozenset(), phi)
    proof, _used = search.expand(root, frozenset())
    if proof is not None:
        result = check_proof(proof, root)
        assert result.ok, f"prover produced a tree the checker rejects: {result.error}"
        assert_restricted_derivation(proof, phi)
    return Verdict(proof is not None, proof, search.stats)
