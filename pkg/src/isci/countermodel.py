"""Countermodel construction from failed proof search.

The construction re-derives the goal under a stricter regime than proof
search: before R-> may fire, every antecedent implication must be
saturated (its consequent present, or its antecedent the succedent) or
treated by L->.  The leftmost open branch of such a derivation is cut at
the R-> applications into worlds; branches are then closed under spawning
a fresh derivation for every sequent whose succedent is an implication,
giving the extra worlds that refute those implications.  The valuation
reads a variable or equation as true at a world exactly when it occurs in
one of the world's antecedents (reflexive equations are true everywhere,
and truth of equations propagates through componentwise composition).

Self-implications (x -> x) in antecedents are exempt from the saturation
requirement: they are forced at every world of every model, and treating
them would spawn derivations of provable sequents, which the construction
cannot use.

The resulting bundle is validated before it is returned: frame laws,
admissibility, monotonicity, identity-to-implication forcing, the
designated world's failure to force the goal, plus the structural
properties the construction promises (succedents never occur in their
world's antecedents, antecedent formulas are forced, succedents are not,
true small equations occur in antecedents, antecedents grow along the
order).  A validation failure means a bug, not a property of the input.
"""

from __future__ import annotations

import sys
import time
from collections import deque
from dataclasses import dataclass

from .calculus import (
    L_IMP,
    R_IMP,
    Derivation,
    RuleInstance,
    Sequent,
    apply_rule,
    is_axiom,
)
from .formulas import (
    Formula,
    Id,
    Imp,
    complexity,
    extended_subformulas_within,
    in_extended_subformulas,
    in_form0,
    sort_key,
    sorted_formulas,
    sub_closure,
)
from .invariants import assert_restricted_derivation
from .printer import format_formula, format_sequent
from .prover import Limits, ResourceExhausted, SearchStats, _ProofSearch, identity_instance
from .semantics import (
    KripkeModel,
    check_admissible,
    check_frame,
    check_identity_entails_implications,
    check_monotonicity,
    forces,
    value,
)

VALIDATION_CAP = 4096


class CounterModelError(RuntimeError):
    """Internal bug detector: the construction violated one of its own
    guarantees (including a spawned sequent turning out provable)."""


class NoOpenBranchError(CounterModelError):
    """The derivation closed, so there is nothing to refute."""


@dataclass(frozen=True, slots=True)
class BranchOccurrence:
    branch: int
    index: int
    sequent: Sequent
    rule: RuleInstance | None  # rule applied at this occurrence along the branch


@dataclass(slots=True)
class World:
    name: str
    occurrences: tuple[BranchOccurrence, ...]
    gamma_max: frozenset[Formula]


@dataclass(slots=True)
class CounterModelBundle:
    formula: Formula
    worlds: list[World]
    segment_edges: frozenset[tuple[str, str]]  # between consecutive worlds of a branch
    spawn_edges: frozenset[tuple[str, str]]  # from an implication succedent to its witness
    order: frozenset[tuple[str, str]]  # reflexive-transitive closure
    designated: str
    model: KripkeModel
    branches: list[list[BranchOccurrence]]
    derivations: list[Derivation]
    stats: SearchStats

    @property
    def base_edges(self) -> frozenset[tuple[str, str]]:
        return self.segment_edges | self.spawn_edges

    def world_named(self, name: str) -> World:
        return next(w for w in self.worlds if w.name == name)

    def to_dot(self) -> str:
        """Graph rendering with each world labeled by its accumulated
        antecedent and the atoms true there."""
        lines = [
            "digraph countermodel {",
            "  rankdir=BT;",
            '  node [shape=box, fontname="monospace"];',
        ]
        from .formulas import variables

        atoms = sorted(variables(self.formula), key=sort_key)
        for w in self.worlds:
            marker = "*" if w.name == self.designated else ""
            parts = [w.name + marker]
            true_atoms = [v.name for v in atoms if value(self.model, v, w.name)]
            if true_atoms:
                parts.append("atoms: " + " ".join(true_atoms))
            for f in sorted_formulas(w.gamma_max):
                parts.append(format_formula(f))
            label = "\\n".join(p.replace('"', '\\"') for p in parts)
            lines.append(f'  {w.name} [label="{label}"];')
        for a, b in sorted(self.base_edges):
            if a != b:
                lines.append(f"  {a} -> {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def model_rows(self) -> list[tuple[Formula, str, int]]:
        """Valuation rows for export: every variable of the goal at every
        world, plus the positive equation entries."""
        from .formulas import variables

        rows: list[tuple[Formula, str, int]] = []
        for v in sorted(variables(self.formula), key=sort_key):
            for w in self.worlds:
                rows.append((v, w.name, value(self.model, v, w.name)))
        for w in self.worlds:
            for f in sorted_formulas(w.gamma_max):
                if isinstance(f, Id) and f.left != f.right:
                    rows.append((f, w.name, 1))
        return rows

    def model_document(self) -> dict:
        from .serialize import model_doc

        return model_doc(
            [w.name for w in self.worlds],
            sorted(self.order),
            self.model_rows(),
            self.designated,
        )


class _Builder:
    def __init__(self, goal: Formula, limits: Limits):
        self.goal = goal
        self.limits = limits
        self.stats = SearchStats()
        self.deadline = time.monotonic() + limits.timeout
        self.branches: list[list[BranchOccurrence]] = []
        self.derivations: list[Derivation] = []
        self.worlds: list[World] = []
        self.segment_edges: set[tuple[str, str]] = set()
        self.spawn_edges: set[tuple[str, str]] = set()
        self.memo: dict[Sequent, str] = {}
        self.pending: deque[tuple[str, Sequent]] = deque()
        # shared provability gate; its failure cache carries across nodes
        self.prover = _ProofSearch(goal, limits)
        self.prover.deadline = self.deadline

    def tick(self):
        self.stats.nodes += 1
        if self.stats.nodes > self.limits.max_nodes:
            raise ResourceExhausted(f"node cap {self.limits.max_nodes} hit")
        if time.monotonic() > self.deadline:
            raise ResourceExhausted(f"timeout {self.limits.timeout}s hit")

    # -- derivation under the saturation-before-R-> regime ------------------

    def build(self, seq: Sequent) -> Derivation:
        d = self._expand(seq, frozenset())
        assert_restricted_derivation(d, self.goal)
        self.derivations.append(d)
        return d

    def _expand(self, seq: Sequent, history: frozenset[Sequent]) -> Derivation:
        self.tick()
        if is_axiom(seq):
            return Derivation(seq)
        # Provable sequents must never sit on an open branch: a world whose
        # antecedents prove one of its own succedents cannot model the
        # branch.  Closing them here also keeps later antecedent growth
        # honest, because every formula injected into a world is justified
        # by a genuinely closed left premise.
        proof, _blockers = self.prover.expand(seq, frozenset())
        if proof is not None:
            return proof
        hist = history | {seq}
        chain: list[tuple[Sequent, RuleInstance]] = []
        current = seq
        while True:
            inst = identity_instance(current, self.goal)
            if inst is None:
                break
            chain.append((current, inst))
            current = apply_rule(current, inst)[0]
            hist = hist | {current}
            self.tick()
            # identity rules are invertible, so the chain of an unprovable
            # sequent stays unprovable and in particular never hits an axiom
            assert not is_axiom(current)
        result = self._tail(current, hist)
        for conclusion, inst in reversed(chain):
            result = Derivation(conclusion, inst, (result,))
        return result

    def _tail(self, seq: Sequent, hist: frozenset[Sequent]) -> Derivation:
        for f in seq.sorted_antecedent():
            if not isinstance(f, Imp) or f.left == f.right:
                continue
            if f.right in seq.antecedent or f.left == seq.succedent:
                continue  # already saturated with respect to f
            inst = RuleInstance(L_IMP, principal=f)
            left, right = apply_rule(seq, inst)
            if left in hist or right in hist:
                continue  # blocked by the branch repetition check
            return Derivation(
                seq, inst, (self._expand(left, hist), self._expand(right, hist))
            )
        if isinstance(seq.succedent, Imp):
            r = RuleInstance(R_IMP)
            premise = apply_rule(seq, r)[0]
            if premise not in hist:
                return Derivation(seq, r, (self._expand(premise, hist),))
        return Derivation(seq)  # open leaf

    # -- branches, worlds, closure ------------------------------------------

    def add_branch(self, nodes: list[Derivation]) -> str:
        bidx = len(self.branches)
        occurrences = [
            BranchOccurrence(bidx, i, node.sequent, node.rule)
            for i, node in enumerate(nodes)
        ]
        self.branches.append(occurrences)
        segments: list[list[BranchOccurrence]] = [[]]
        for occ in occurrences:
            segments[-1].append(occ)
            if occ.rule is not None and occ.rule.rule == R_IMP:
                segments.append([])
        names: list[str] = []
        for seg in segments:
            name = f"w{len(self.worlds)}"
            union = frozenset().union(*(o.sequent.antecedent for o in seg))
            self.worlds.append(World(name, tuple(seg), union))
            names.append(name)
        for a, b in zip(names, names[1:]):
            self.segment_edges.add((a, b))
        world_of = {}
        for name, seg in zip(names, segments):
            for occ in seg:
                world_of[occ.index] = name
        for occ in occurrences:
            if occ.rule is not None and occ.rule.rule == R_IMP:
                premise = occurrences[occ.index + 1].sequent
                self.memo.setdefault(premise, world_of[occ.index + 1])
        for occ in occurrences:
            succ = occ.sequent.succedent
            if isinstance(succ, Imp):
                world = self.world_named(world_of[occ.index])
                key = Sequent(world.gamma_max | {succ.left}, succ.right)
                self.pending.append((world.name, key))
        return names[0]

    def world_named(self, name: str) -> World:
        return next(w for w in self.worlds if w.name == name)

    def close(self) -> None:
        root = Sequent(frozenset(), self.goal)
        d0 = self.build(root)
        b0 = leftmost_open_branch(d0)
        self.add_branch(b0)
        while self.pending:
            src, key = self.pending.popleft()
            target = self.memo.get(key)
            if target is None:
                d = self.build(key)
                branch = _leftmost_open_or_none(d)
                if branch is None:
                    raise CounterModelError(
                        f"spawned sequent is provable: {format_sequent(key)}"
                    )
                target = self.add_branch(branch)
                self.memo[key] = target
            self.spawn_edges.add((src, target))

    def run(self) -> CounterModelBundle:
        self.close()
        return self.assemble()

    def assemble(self) -> CounterModelBundle:
        names = [w.name for w in self.worlds]
        order = _reflexive_transitive_closure(names, self.segment_edges | self.spawn_edges)
        rows: dict[tuple[Formula, str], int] = {}
        n = complexity(self.goal)
        for w in self.worlds:
            for f in w.gamma_max:
                if in_form0(f):
                    if isinstance(f, Id) and complexity(f) > n:
                        raise CounterModelError(
                            f"antecedent equation above the complexity bound: {format_formula(f)}"
                        )
                    rows[(f, w.name)] = 1
        model = KripkeModel(tuple(names), order, rows)
        return CounterModelBundle(
            formula=self.goal,
            worlds=self.worlds,
            segment_edges=frozenset(self.segment_edges),
            spawn_edges=frozenset(self.spawn_edges),
            order=order,
            designated=names[0],
            model=model,
            branches=self.branches,
            derivations=self.derivations,
            stats=self.stats,
        )


def _reflexive_transitive_closure(names: list[str], edges: set[tuple[str, str]]):
    reach = {a: {a} for a in names}
    for a, b in edges:
        reach[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in names:
            extra = set()
            for b in reach[a]:
                extra |= reach[b]
            if not extra <= reach[a]:
                reach[a] |= extra
                changed = True
    return frozenset((a, b) for a in names for b in reach[a])


def _leftmost_open_or_none(d: Derivation) -> list[Derivation] | None:
    path: list[Derivation] = []

    def walk(node: Derivation) -> bool:
        path.append(node)
        if node.rule is None:
            if not is_axiom(node.sequent):
                return True
            path.pop()
            return False
        for child in node.children:
            if walk(child):
                return True
        path.pop()
        return False

    return path if walk(d) else None


def leftmost_open_branch(d: Derivation) -> list[Derivation]:
    """Root-to-leaf path to the leftmost open leaf, left premises first."""
    branch = _leftmost_open_or_none(d)
    if branch is None:
        raise NoOpenBranchError("derivation has no open leaf (the sequent is provable)")
    return branch


def build_c5_derivation(s: Sequent, goal: Formula, limits: Limits | None = None) -> Derivation:
    """A full derivation of `s` under the countermodel regime (saturation
    before R->, both premises of every L-> expanded)."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    return _Builder(goal, limits or Limits()).build(s)


def segment_worlds(nodes: list[Derivation]):
    """Split a branch at its R-> applications.  Returns the list of
    segments (lists of branch positions) and the edges between consecutive
    segments."""
    segments: list[list[int]] = [[]]
    for i, node in enumerate(nodes):
        segments[-1].append(i)
        if node.rule is not None and node.rule.rule == R_IMP:
            segments.append([])
    edges = [(i, i + 1) for i in range(len(segments) - 1)]
    return segments, edges


def close_branch_set(phi: Formula, limits: Limits | None = None):
    """Close the singleton set holding the goal's leftmost open branch
    under spawning a derivation of `antecedents, psi |- chi` for every
    branch sequent whose succedent is the implication psi -> chi.  Spawns
    are memoized per sequent, and a branch's own R-> premises pre-register
    themselves, so a spawn that coincides with the next world on the same
    branch reuses it.  Returns the builder holding branches, worlds and
    both edge families; `assemble_model` turns it into a bundle."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    builder = _Builder(phi, limits or Limits())
    builder.close()
    return builder


def assemble_model(builder: "_Builder") -> CounterModelBundle:
    """Assemble the Kripke model from a closed branch set: the worlds of
    all branches, the reflexive-transitive closure of both edge families,
    and the occurrence-based valuation."""
    return builder.assemble()


def countermodel(phi: Formula, limits: Limits | None = None) -> CounterModelBundle:
    """Build and validate a countermodel for an unprovable formula.  The
    caller is responsible for having established NotProved; on a provable
    formula this raises NoOpenBranchError."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    bundle = _Builder(phi, limits or Limits()).run()
    validate_bundle(bundle)
    return bundle


def _validation_material(phi: Formula, bundle: CounterModelBundle) -> frozenset[Formula]:
    exs = extended_subformulas_within(phi, VALIDATION_CAP)
    if exs is not None:
        return exs
    # Degraded base for very large goals: everything the model mentions.
    seen: set[Formula] = {phi}
    for w in bundle.worlds:
        seen |= w.gamma_max
        for occ in w.occurrences:
            seen.add(occ.sequent.succedent)
    return sub_closure(seen)


def validate_bundle(bundle: CounterModelBundle) -> None:
    phi = bundle.formula
    model = bundle.model
    n = complexity(phi)
    if not check_frame(model):
        raise CounterModelError("order is not a preorder")
    for src, dst in bundle.base_edges:
        if not bundle.world_named(src).gamma_max <= bundle.world_named(dst).gamma_max:
            raise CounterModelError(f"antecedents shrink along {src} <= {dst}")
    memo: dict = {}
    for w in bundle.worlds:
        for occ in w.occurrences:
            succ = occ.sequent.succedent
            if in_form0(succ) and succ in w.gamma_max:
                raise CounterModelError(
                    f"succedent {format_formula(succ)} occurs in the antecedents of {w.name}"
                )
            if forces(model, w.name, succ, memo):
                raise CounterModelError(
                    f"{w.name} forces its succedent {format_formula(succ)}"
                )
        for f in sorted_formulas(w.gamma_max):
            if not forces(model, w.name, f, memo):
                raise CounterModelError(
                    f"{w.name} does not force its antecedent formula {format_formula(f)}"
                )
    material = _validation_material(phi, bundle)
    msorted = sorted_formulas(material)
    # Equations the calculus was allowed to compose: members of the
    # extended-subformula closure.  Equations outside it can become true by
    # decomposition when splitting a composed equation injects one of its
    # sides' components into an antecedent, but the subformula bound
    # forbids the rules from ever placing them on the left.
    small_eqs = [
        e
        for a in msorted
        for b in msorted
        if a != b and complexity(a) + complexity(b) + 1 <= n
        for e in (Id(a, b),)
        if in_extended_subformulas(e, phi)
    ]
    for e in small_eqs:
        for w in bundle.worlds:
            if value(model, e, w.name) == 1 and e not in w.gamma_max:
                raise CounterModelError(
                    f"true small equation {format_formula(e)} missing from {w.name}'s antecedents"
                )
    base_eqs = [f for f in msorted if isinstance(f, Id)]
    if not check_admissible(model, base_eqs):
        raise CounterModelError("assignment is not admissible on the checked base")
    if not check_monotonicity(model, list(msorted) + [phi]):
        raise CounterModelError("forcing is not monotone on the checked base")
    wide_eqs = [
        Id(a, b)
        for a in msorted
        for b in msorted
        if complexity(a) + complexity(b) + 1 <= 2 * n + 1
    ]
    if not check_identity_entails_implications(model, wide_eqs):
        raise CounterModelError("a true equation fails to force its implications")
    if forces(model, bundle.designated, phi, memo):
        raise CounterModelError("designated world forces the goal formula")
