"""Command line interface.

Commands: decide, prove, countermodel, check-proof, check-model, exsub.
Exit codes: 0 proved/valid, 1 refuted/invalid, 2 input error, 3 resource
caps hit, 4 internal validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import serialize
from .calculus import Sequent, check_proof
from .countermodel import CounterModelError, NoOpenBranchError, countermodel
from .formulas import complexity, extended_subformulas, sorted_formulas, variables
from .parser import ParseError, parse_formula
from .printer import (
    format_derivation,
    format_derivation_dot,
    format_derivation_latex,
    format_formula,
    format_model,
    format_model_dot,
)
from .prover import Limits, ResourceExhausted, prove
from .semantics import (
    bounded_countermodel_search,
    check_admissible,
    check_frame,
    check_identity_entails_implications,
    check_monotonicity,
    forces,
)

EXIT_PROVED = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2
EXIT_RESOURCES = 3
EXIT_INTERNAL = 4


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as handle:
            return handle.read()
    return arg


def _limits(args) -> Limits:
    return Limits(max_nodes=args.max_nodes, timeout=args.timeout)


def _emit(args, text: str):
    if not args.quiet:
        sys.stdout.write(text)


def _verdict_line(args, text: str):
    # structured output must be a single document on stdout
    print(text, file=sys.stderr if args.format == "structured" else sys.stdout)


def _render_proof(args, proof) -> str:
    if args.format == "latex":
        return format_derivation_latex(proof)
    if args.format == "graph":
        return format_derivation_dot(proof)
    return format_derivation(proof)


def _render_model(args, doc) -> str:
    if args.format == "graph":
        return format_model_dot(doc)
    return format_model(doc)


def _cmd_decide(args) -> int:
    phi = parse_formula(_read_input(args.input))
    limits = _limits(args)
    verdict = prove(phi, limits)
    if verdict.proved:
        _verdict_line(args, "PROVED")
        if args.format == "structured":
            _emit(args, serialize.dumps(serialize.verdict_doc(phi, proof=verdict.proof)))
        else:
            _emit(args, _render_proof(args, verdict.proof))
        code = EXIT_PROVED
    else:
        bundle = countermodel(phi, limits)
        doc = bundle.model_document()
        _verdict_line(args, "REFUTED")
        if args.format == "structured":
            _emit(args, serialize.dumps(serialize.verdict_doc(phi, model=doc)))
        elif args.format == "graph":
            _emit(args, bundle.to_dot())
        else:
            _emit(args, _render_model(args, doc))
        code = EXIT_REFUTED
    if args.oracle is not None:
        found = bounded_countermodel_search(phi, max_worlds=args.oracle)
        if verdict.proved and found is not None:
            model, world = found
            print(
                f"oracle: DISAGREEMENT, countermodel at {world} despite a proof",
                file=sys.stderr,
            )
            return EXIT_INTERNAL
        if verdict.proved:
            print(f"oracle: agreement, no countermodel within {args.oracle} worlds")
        elif found is not None:
            print(f"oracle: agreement, countermodel found at {found[1]}")
        else:
            print(
                f"oracle: exhausted at {args.oracle} worlds "
                "(the refutation may need a larger frame)"
            )
    return code


def _cmd_prove(args) -> int:
    phi = parse_formula(_read_input(args.input))
    verdict = prove(phi, _limits(args))
    if verdict.proved:
        _verdict_line(args, "PROVED")
        if args.format == "structured":
            _emit(args, serialize.dumps(serialize.verdict_doc(phi, proof=verdict.proof)))
        else:
            _emit(args, _render_proof(args, verdict.proof))
        return EXIT_PROVED
    print("NOT PROVED")
    return EXIT_REFUTED


def _cmd_countermodel(args) -> int:
    phi = parse_formula(_read_input(args.input))
    limits = _limits(args)
    verdict = prove(phi, limits)
    if verdict.proved:
        print("PROVED (no countermodel exists)")
        return EXIT_PROVED
    bundle = countermodel(phi, limits)
    doc = bundle.model_document()
    _verdict_line(args, "REFUTED")
    if args.format == "structured":
        _emit(args, serialize.dumps(serialize.verdict_doc(phi, model=doc)))
    elif args.format == "graph":
        _emit(args, bundle.to_dot())
    else:
        _emit(args, _render_model(args, doc))
    return EXIT_REFUTED


def _cmd_check_proof(args) -> int:
    doc = serialize.loads(_read_input(args.input))
    proof_node = doc.get("proof", doc)
    derivation = serialize.derivation_from_doc(proof_node)
    if "formula" in doc:
        claim = Sequent(frozenset(), parse_formula(doc["formula"]))
    else:
        claim = derivation.sequent
    result = check_proof(derivation, claim)
    if result.ok:
        print("VALID PROOF")
        return EXIT_PROVED
    print(f"INVALID PROOF: {result.error}")
    return EXIT_REFUTED


def _cmd_check_model(args) -> int:
    doc = serialize.loads(_read_input(args.input))
    model_node = doc.get("model", doc)
    model, designated = serialize.model_from_doc(model_node)
    base = sorted_formulas({f for (f, _w) in model.valuation})
    phi = None
    if "formula" in doc:
        phi = parse_formula(doc["formula"])
        base = sorted_formulas(set(base) | extended_subformulas(phi))
    failures = []
    if not check_frame(model):
        failures.append("order is not reflexive-transitive")
    else:
        if not check_admissible(model, base):
            failures.append("assignment not admissible")
        if not check_monotonicity(model, base):
            failures.append("forcing not monotone")
        if not check_identity_entails_implications(model, base):
            failures.append("a true equation fails to force its implications")
        if phi is not None and forces(model, designated, phi):
            failures.append("designated world forces the formula")
    if failures:
        print("INVALID MODEL: " + "; ".join(failures))
        return EXIT_REFUTED
    print("VALID MODEL")
    return EXIT_PROVED


def _cmd_exsub(args) -> int:
    phi = parse_formula(_read_input(args.input))
    members = sorted_formulas(extended_subformulas(phi))
    members.sort(key=complexity)
    for f in members:
        print(f"c={complexity(f)}  {format_formula(f)}")
    print(f"total: {len(members)} ({len(variables(phi))} variables, bound c={complexity(phi)})")
    return EXIT_PROVED


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isci",
        description="Decision procedure for intuitionistic sentential logic "
        "with identity: prove a formula or refute it with a checked Kripke "
        "countermodel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="formula (or document), '-' for stdin, or a file path")
        p.add_argument(
            "--format",
            choices=["text", "structured", "graph", "latex"],
            default="text",
        )
        p.add_argument("--max-nodes", type=int, default=1_000_000)
        p.add_argument("--timeout", type=float, default=30.0)
        p.add_argument("--quiet", action="store_true", help="verdict line only")

    p = sub.add_parser("decide", help="prove or refute a formula")
    common(p)
    p.add_argument(
        "--oracle",
        nargs="?",
        type=int,
        const=3,
        default=None,
        metavar="K",
        help="cross-check against brute-force search over at most K worlds",
    )
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("prove", help="proof search only, no countermodel")
    common(p)
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("countermodel", help="build a countermodel for an unprovable formula")
    common(p)
    p.set_defaults(func=_cmd_countermodel)

    p = sub.add_parser("check-proof", help="validate a serialized proof")
    common(p)
    p.set_defaults(func=_cmd_check_proof)

    p = sub.add_parser("check-model", help="validate a serialized model")
    common(p)
    p.set_defaults(func=_cmd_check_model)

    p = sub.add_parser("exsub", help="print the extended subformulas of a formula")
    common(p)
    p.set_defaults(func=_cmd_exsub)
    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, serialize.DocumentError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceExhausted as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    except (CounterModelError, NoOpenBranchError, AssertionError) as exc:
        print(f"internal validation failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
