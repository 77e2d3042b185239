import pytest

from isci.calculus import is_axiom, sequent
from isci.countermodel import (
    NoOpenBranchError,
    build_c5_derivation,
    countermodel,
    leftmost_open_branch,
    segment_worlds,
)
from isci.formulas import Id, Imp, Var, complexity, extended_subformulas, in_form0
from isci.invariants import antecedents_inherited, no_branch_repetition
from isci.parser import parse_formula
from isci.prover import prove
from isci.semantics import forces, value
from isci.serialize import model_from_doc

p, q, r = Var("p"), Var("q"), Var("r")


def build(text):
    phi = parse_formula(text)
    return phi, build_c5_derivation(sequent((), phi), phi)


def test_build_c5_on_implication_goal():
    phi, d = build("p -> q")
    branch = leftmost_open_branch(d)
    leaf = branch[-1].sequent
    assert p in leaf.antecedent
    assert leaf.succedent == q
    assert antecedents_inherited(d)
    assert no_branch_repetition(d)


def test_build_c5_on_bare_variable():
    phi, d = build("p")
    assert d.rule is None and not is_axiom(d.sequent)
    assert [n.sequent for n in leftmost_open_branch(d)] == [sequent((), p)]


def test_build_c5_on_provable_goal_closes():
    phi, d = build("p == p")
    with pytest.raises(NoOpenBranchError):
        leftmost_open_branch(d)


def test_segment_worlds_no_r_imp():
    phi, d = build("p")
    segments, edges = segment_worlds(leftmost_open_branch(d))
    assert len(segments) == 1 and edges == []


def test_segment_worlds_splits_at_r_imp():
    phi, d = build("p -> q")
    segments, edges = segment_worlds(leftmost_open_branch(d))
    assert len(segments) == 2
    assert edges == [(0, 1)]


def test_segment_worlds_chain_of_three():
    phi, d = build("p -> q -> r")
    segments, edges = segment_worlds(leftmost_open_branch(d))
    assert len(segments) == 3
    assert edges == [(0, 1), (1, 2)]


def refute(text):
    phi = parse_formula(text)
    assert not prove(phi).proved
    return phi, countermodel(phi)


def test_variable_countermodel():
    phi, b = refute("p")
    assert len(b.worlds) == 1
    assert value(b.model, p, b.designated) == 0
    assert not forces(b.model, b.designated, phi)
    assert value(b.model, Id(q, q), b.designated) == 1


def test_atomic_equation_countermodel():
    phi, b = refute("p == q")
    assert value(b.model, Id(p, q), b.designated) == 0
    assert not forces(b.model, b.designated, phi)


def test_implication_countermodel_has_witness_world():
    phi, b = refute("p -> q")
    assert len(b.worlds) == 2
    w0, w1 = (w.name for w in b.worlds)
    assert value(b.model, p, w0) == 0
    assert value(b.model, p, w1) == 1
    assert all(value(b.model, q, w.name) == 0 for w in b.worlds)


def test_double_negation_countermodel():
    phi, b = refute("((p -> #) -> #) -> p")
    inner = parse_formula("(p -> #) -> #")
    assert any(
        forces(b.model, w.name, inner) and not forces(b.model, w.name, p)
        for w in b.worlds
    )


def test_peirce_countermodel():
    phi, b = refute("((p -> q) -> p) -> p")
    assert not forces(b.model, b.designated, phi)


def test_trivial_equation_always_true():
    phi, b = refute("p")
    assert value(b.model, Id(Imp(p, r), Imp(p, r)), b.designated) == 1


def test_succedents_never_occur_in_their_world():
    for text in ("p == q", "((p -> q) -> p) -> p", "(p -> q) -> (p == q)"):
        phi, b = refute(text)
        for w in b.worlds:
            for occ in w.occurrences:
                succ = occ.sequent.succedent
                if in_form0(succ):
                    assert succ not in w.gamma_max


def test_true_small_equations_occur_in_antecedents():
    phi, b = refute("(p -> q) -> (p == q)")
    n = complexity(phi)
    members = sorted(extended_subformulas(phi), key=str)
    for a in members:
        for c in members:
            e = Id(a, c)
            if a != c and complexity(e) <= n:
                for w in b.worlds:
                    if value(b.model, e, w.name) == 1:
                        assert e in w.gamma_max


def test_antecedents_grow_along_the_order():
    phi, b = refute("((p -> #) -> #) -> p")
    for src, dst in b.base_edges:
        assert b.world_named(src).gamma_max <= b.world_named(dst).gamma_max


def test_branch_worlds_form_a_chain():
    phi, b = refute("p -> q -> r")
    names = [w.name for w in b.worlds]
    for a in names:
        for c in names:
            assert (a, c) in b.order or (c, a) in b.order


def test_spawned_branches_are_memoized():
    phi, b = refute("((p -> q) -> p) -> p")
    keys = [occ.sequent for branch in b.branches for occ in branch]
    assert len(b.branches) <= len(keys)
    # rebuilding is deterministic
    b2 = countermodel(phi)
    assert [w.name for w in b2.worlds] == [w.name for w in b.worlds]
    assert b2.order == b.order
    assert b2.model.valuation == b.model.valuation


def test_model_document_reimports_equivalently():
    phi, b = refute("((p -> q) -> p) -> p")
    model, designated = model_from_doc(b.model_document())
    assert designated == b.designated
    assert model.worlds == tuple(w.name for w in b.worlds)
    assert not forces(model, designated, phi)
    for w in b.worlds:
        for f in (p, q):
            assert value(model, f, w.name) == value(b.model, f, w.name)


def test_close_branch_set_variable_is_singleton():
    from isci.countermodel import assemble_model, close_branch_set

    builder = close_branch_set(p)
    assert len(builder.branches) == 1
    assert [occ.sequent for occ in builder.branches[0]] == [sequent((), p)]
    assert builder.spawn_edges == set()
    bundle = assemble_model(builder)
    assert not forces(bundle.model, bundle.designated, p)


def test_close_branch_set_spawn_reuses_r_imp_premise():
    from isci.countermodel import assemble_model, close_branch_set

    phi = parse_formula("p -> q")
    builder = close_branch_set(phi)
    # the spawned witness for the implication succedent coincides with the
    # world the branch itself enters at its R-> application
    assert builder.spawn_edges <= builder.segment_edges
    bundle = assemble_model(builder)
    assert len(bundle.worlds) == 2
    assert not forces(bundle.model, bundle.designated, phi)


def test_close_branch_set_peirce_is_finite_and_refutes():
    from isci.countermodel import assemble_model, close_branch_set

    phi = parse_formula("((p -> q) -> p) -> p")
    builder = close_branch_set(phi)
    assert 1 <= len(builder.branches) < 20
    bundle = assemble_model(builder)
    assert not forces(bundle.model, bundle.designated, phi)


def test_provable_nodes_never_reach_open_branches():
    # regression: these goals once poisoned a world with a succedent its own
    # antecedents prove (directly or after later growth)
    for text in ("p == (q == p) -> q == p", "p -> (# == q) -> #", "p -> (q == #) -> q"):
        phi = parse_formula(text)
        if prove(phi).proved:
            continue
        b = countermodel(phi)
        assert not forces(b.model, b.designated, phi)


def test_bottom_antecedent_implications_close_by_r_imp():
    # a succedent like '# -> q' is forced everywhere, so its node must close
    phi = parse_formula("p -> (# == q) -> #")
    assert not prove(phi).proved
    b = countermodel(phi)
    for w in b.worlds:
        for occ in w.occurrences:
            succ = occ.sequent.succedent
            if isinstance(succ, Imp):
                assert succ.left != succ.right
                assert not forces(b.model, w.name, succ)
