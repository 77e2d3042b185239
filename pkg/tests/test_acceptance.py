"""Acceptance suite.

Each criterion is one test; a PASS line is printed at the end of each so a
verbose run reads as a checklist.  The heavy work happens once in a
module-scoped fixture; the determinism criterion recomputes everything
from scratch and compares the rendered bytes.
"""

import json
import time

import pytest

from isci.calculus import check_proof, sequent
from isci.cli import main as cli_main
from isci.countermodel import countermodel
from isci.formulas import (
    BOT,
    Id,
    Imp,
    Var,
    complexity,
    extended_subformulas,
    in_form0,
    sort_key,
    sorted_formulas,
)
from isci.invariants import (
    antecedents_inherited,
    extended_subformula_offenders,
    no_branch_repetition,
)
from isci.parser import parse_formula
from isci.printer import format_formula
from isci.prover import prove
from isci.semantics import (
    bounded_countermodel_search,
    check_admissible,
    check_frame,
    check_identity_entails_implications,
    check_monotonicity,
    forces,
    value,
)
from isci.serialize import dumps, verdict_doc

THEOREMS = [
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p == p",
    "(p == q) -> (p -> q)",
    "(p == q) -> (q -> p)",
    "(p == q) -> ((p -> #) == (q -> #))",
    "(p == q) -> (r == s) -> ((p -> r) == (q -> s))",
    "(p == q) -> (r == s) -> ((p == r) == (q == s))",
]

NON_THEOREMS = [
    "((p -> q) -> p) -> p",
    "((p -> #) -> #) -> p",
    "p == q",
    "(p -> q) -> (p == q)",
    "(p -> p) == (q -> q)",
]

UNDETERMINED = "(p == q) -> (q == p)"  # decided either way, oracle-checked

SWEEP_ATOMS = [Var("p"), Var("q"), BOT]
SWEEP_MAX_COMPLEXITY = 2
SWEEP_ORACLE_WORLDS = 3


def enumerate_sweep_formulas():
    by_c = [sorted(SWEEP_ATOMS, key=sort_key)]
    for c in range(1, SWEEP_MAX_COMPLEXITY + 1):
        layer = []
        for cl in range(c):
            for left in by_c[cl]:
                for right in by_c[c - 1 - cl]:
                    layer.append(Imp(left, right))
                    layer.append(Id(left, right))
        by_c.append(sorted(layer, key=sort_key))
    return [f for layer in by_c for f in layer]


def run_suite():
    results = {"theorems": [], "nontheorems": [], "sweep": [], "renderings": []}
    for text in THEOREMS:
        phi = parse_formula(text)
        t0 = time.monotonic()
        verdict = prove(phi)
        elapsed = time.monotonic() - t0
        doc = dumps(verdict_doc(phi, proof=verdict.proof)) if verdict.proved else ""
        results["theorems"].append((text, phi, verdict, elapsed, doc))
        results["renderings"].append(doc)
    for text in NON_THEOREMS:
        phi = parse_formula(text)
        t0 = time.monotonic()
        verdict = prove(phi)
        bundle = countermodel(phi) if not verdict.proved else None
        elapsed = time.monotonic() - t0
        doc = dumps(verdict_doc(phi, model=bundle.model_document())) if bundle else ""
        results["nontheorems"].append((text, phi, verdict, bundle, elapsed, doc))
        results["renderings"].append(doc)
    phi = parse_formula(UNDETERMINED)
    verdict = prove(phi)
    oracle = bounded_countermodel_search(phi, max_worlds=SWEEP_ORACLE_WORLDS)
    results["undetermined"] = (phi, verdict, oracle)
    results["renderings"].append(f"{UNDETERMINED}: {'proved' if verdict.proved else 'refuted'}\n")
    t0 = time.monotonic()
    for phi in enumerate_sweep_formulas():
        verdict = prove(phi)
        if verdict.proved:
            oracle = bounded_countermodel_search(phi, max_worlds=SWEEP_ORACLE_WORLDS)
            bundle = None
        else:
            oracle = "skipped"
            bundle = countermodel(phi)
        line = (
            f"{format_formula(phi)}: "
            f"{'PROVED' if verdict.proved else 'REFUTED'}"
        )
        if bundle is not None:
            line += " " + json.dumps(bundle.model_document())
        results["sweep"].append((phi, verdict, bundle, oracle))
        results["renderings"].append(line + "\n")
    results["sweep_elapsed"] = time.monotonic() - t0
    return results


@pytest.fixture(scope="module")
def suite():
    return run_suite()


def model_checks(phi, bundle):
    """The five checks criterion 2 names, with bases drawn from the goal's
    extended subformulas."""
    model = bundle.model
    base = sorted_formulas(extended_subformulas(phi))
    base_eqs = [f for f in base if isinstance(f, Id)]
    assert check_frame(model)
    assert check_admissible(model, base_eqs)
    assert check_monotonicity(model, base + [phi])
    assert check_identity_entails_implications(model, base_eqs)
    assert not forces(model, bundle.designated, phi)


def test_criterion_1_theorem_suite(suite):
    for text, phi, verdict, elapsed, _doc in suite["theorems"]:
        assert verdict.proved, f"expected a proof of {text}"
        assert check_proof(verdict.proof, sequent((), phi)).ok, text
        assert elapsed < 1.0, f"{text} took {elapsed:.2f}s"
    print("ACCEPTANCE 1 theorem suite: PASS")


def test_criterion_2_non_theorem_suite(suite):
    for text, phi, verdict, bundle, elapsed, _doc in suite["nontheorems"]:
        assert not verdict.proved, f"expected {text} to be unprovable"
        assert bundle is not None
        model_checks(phi, bundle)
        assert elapsed < 5.0, f"{text} took {elapsed:.2f}s"
    phi, verdict, oracle = suite["undetermined"]
    if verdict.proved:
        assert oracle is None, "proved, yet the bounded oracle found a countermodel"
        assert check_proof(verdict.proof, sequent((), phi)).ok
    else:
        assert oracle is not None, "refuted, yet the bounded oracle found nothing"
    print(
        "ACCEPTANCE 2 non-theorem suite: PASS "
        f"({format_formula(phi)} decided as {'PROVED' if verdict.proved else 'REFUTED'}, oracle agrees)"
    )


def test_criterion_3_exhaustive_sweep(suite):
    assert len(suite["sweep"]) == 237
    proved = refuted = 0
    for phi, verdict, bundle, oracle in suite["sweep"]:
        if verdict.proved:
            proved += 1
            assert oracle is None, f"disagreement on {format_formula(phi)}"
        else:
            refuted += 1
            assert bundle is not None
            model_checks(phi, bundle)
    assert proved + refuted == 237
    assert suite["sweep_elapsed"] < 300.0
    print(
        f"ACCEPTANCE 3 exhaustive sweep: PASS "
        f"({proved} proved, {refuted} refuted, {suite['sweep_elapsed']:.1f}s, 0 disagreements)"
    )


def assert_derivation_invariants(d, phi):
    assert antecedents_inherited(d)
    assert no_branch_repetition(d)
    assert extended_subformula_offenders(d, phi) == []


def assert_model_invariants(phi, bundle):
    # succedents of a world never occur among its antecedents (and get
    # value 0 there), and true small equations occur in antecedents
    n = complexity(phi)
    model = bundle.model
    for w in bundle.worlds:
        for occ in w.occurrences:
            succ = occ.sequent.succedent
            if in_form0(succ):
                assert succ not in w.gamma_max
                assert value(model, succ, w.name) == 0
    members = sorted_formulas(extended_subformulas(phi))
    closure = extended_subformulas(phi)
    for a in members:
        for b in members:
            if a != b and complexity(a) + complexity(b) + 1 <= n:
                e = Id(a, b)
                if e not in closure:
                    continue  # the subformula bound keeps it off antecedents
                for w in bundle.worlds:
                    if value(model, e, w.name) == 1:
                        assert e in w.gamma_max


def test_criterion_4_instrumented_invariants(suite):
    derivations = 0
    models = 0
    for text, phi, verdict, _elapsed, _doc in suite["theorems"]:
        assert_derivation_invariants(verdict.proof, phi)
        derivations += 1
    for text, phi, _verdict, bundle, _elapsed, _doc in suite["nontheorems"]:
        for d in bundle.derivations:
            assert_derivation_invariants(d, phi)
            derivations += 1
        assert_model_invariants(phi, bundle)
        models += 1
    for phi, verdict, bundle, _oracle in suite["sweep"]:
        if verdict.proved:
            assert_derivation_invariants(verdict.proof, phi)
            derivations += 1
        else:
            for d in bundle.derivations:
                assert_derivation_invariants(d, phi)
                derivations += 1
            assert_model_invariants(phi, bundle)
            models += 1
    print(
        f"ACCEPTANCE 4 instrumented invariants: PASS "
        f"({derivations} derivations, {models} models)"
    )


def test_criterion_5_determinism(suite):
    again = run_suite()
    assert suite["renderings"] == again["renderings"]
    first = [v.stats for _, _, v, _, _ in suite["theorems"]]
    second = [v.stats for _, _, v, _, _ in again["theorems"]]
    assert first == second
    print("ACCEPTANCE 5 determinism: PASS (byte-identical reruns)")


def test_criterion_6_round_trip(suite, capsys):
    checked = 0
    for _text, _phi, _verdict, _elapsed, doc in suite["theorems"]:
        assert cli_main(["check-proof", doc]) == 0
        checked += 1
    for _text, _phi, _verdict, _bundle, _elapsed, doc in suite["nontheorems"]:
        assert cli_main(["check-model", doc]) == 0
        checked += 1
    capsys.readouterr()
    print(f"ACCEPTANCE 6 round-trip: PASS ({checked} documents re-validated)")
