"""Decision procedure for intuitionistic sentential logic with identity.

`prove` searches for a sequent-calculus proof; when that fails,
`countermodel` assembles a finite Kripke model refuting the formula and
validates it against the semantics before returning it.
"""

from .calculus import (
    Derivation,
    RuleInstance,
    Sequent,
    applicable_instances,
    apply_rule,
    check_proof,
    is_axiom,
    sequent,
)
from .countermodel import (
    CounterModelBundle,
    CounterModelError,
    NoOpenBranchError,
    assemble_model,
    build_c5_derivation,
    close_branch_set,
    countermodel,
    leftmost_open_branch,
    segment_worlds,
)
from .formulas import (
    BOT,
    Bottom,
    Formula,
    Id,
    Imp,
    Var,
    canonical_compare,
    classify,
    complexity,
    extended_subformulas,
    in_extended_subformulas,
    in_form0,
    subformulas,
)
from .parser import ParseError, parse_formula, parse_sequent
from .printer import format_derivation, format_formula, format_model, format_sequent
from .prover import (
    Limits,
    ResourceExhausted,
    SearchStats,
    Verdict,
    prove,
    saturate_identities,
)
from .semantics import (
    KripkeModel,
    bounded_countermodel_search,
    check_admissible,
    check_frame,
    check_identity_entails_implications,
    check_monotonicity,
    forces,
    valid_in_model,
)

__all__ = [
    "BOT",
    "Bottom",
    "CounterModelBundle",
    "CounterModelError",
    "Derivation",
    "Formula",
    "Id",
    "Imp",
    "KripkeModel",
    "Limits",
    "NoOpenBranchError",
    "ParseError",
    "ResourceExhausted",
    "RuleInstance",
    "SearchStats",
    "Sequent",
    "Var",
    "Verdict",
    "applicable_instances",
    "apply_rule",
    "assemble_model",
    "close_branch_set",
    "bounded_countermodel_search",
    "build_c5_derivation",
    "canonical_compare",
    "check_admissible",
    "check_frame",
    "check_identity_entails_implications",
    "check_monotonicity",
    "check_proof",
    "classify",
    "complexity",
    "countermodel",
    "extended_subformulas",
    "forces",
    "format_derivation",
    "format_formula",
    "format_model",
    "format_sequent",
    "in_extended_subformulas",
    "in_form0",
    "is_axiom",
    "leftmost_open_branch",
    "parse_formula",
    "parse_sequent",
    "prove",
    "saturate_identities",
    "segment_worlds",
    "sequent",
    "subformulas",
    "valid_in_model",
]
