"""Command-line surface.

Subcommands: homology, gamma, gen-ham, homotopy, parity-audit,
conformance.  JSON output is the stable machine surface and is
byte-deterministic for identical inputs and flags; table output is
human-oriented and unstable.

Exit codes: 0 success (mismatch findings included), 1 input error,
2 cap refusal, 3 no satisfying assignment, 4 nondeterministic graph.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from itertools import permutations
from pathlib import Path

from . import chaincomplex
from .chaincomplex import Chain
from .cnf import (
    CapExceededError,
    DimacsParseError,
    format_dimacs,
    parse_dimacs,
    satisfying_assignments,
)
from .intlinalg import kernel_basis, rank
from .pathcomplex import (
    DEFAULT_GENERATOR_CAP,
    NotSatisfyingError,
    MODEL_REACHABILITY,
    MODEL_STEP,
    build_complex,
    build_trace_complex,
    load_fixture_complex,
)
from .sattopology import (
    MODEL_TRACE,
    PARITY_VARIANTS,
    VARIANT_ADJACENT,
    DegenerateGammaError,
    NondeterministicGraphError,
    chain_homotopy_check,
    gamma_cycle,
    hamiltonian_encoding_mode,
    hamiltonian_formula,
    parity_boundary_audit,
    parity_chain,
)
from .verifier import build_config_graph

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2
EXIT_UNSAT = 3
EXIT_NONDETERMINISTIC = 4

FIXTURE_CNF_SAT = "two_var_example.cnf"
FIXTURE_CNF_UNSAT = "contradiction.cnf"
FIXTURE_COMPLEX = "two_var_example_complex.json"


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def bundled_fixture_dir():
    """Directory containing the bundled fixture corpus."""
    return Path(resources.files("sathomology") / "fixtures")


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from None


def _load_formula(path):
    try:
        return parse_dimacs(_read_text(path))
    except DimacsParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def _parse_assignment(text, num_vars):
    if any(ch not in "01TFtf" for ch in text):
        raise CliError(f"assignment {text!r} must be a string over 0/1 or T/F", EXIT_INPUT)
    if len(text) != num_vars:
        raise CliError(f"assignment length {len(text)} != {num_vars} variables", EXIT_INPUT)
    return tuple(ch in "1Tt" for ch in text)


def _pick_assignment(formula, args, var_cap):
    if args.assignment:
        return _parse_assignment(args.assignment, formula.num_vars)
    try:
        sats = satisfying_assignments(formula, var_cap=var_cap)
    except CapExceededError as exc:
        raise CliError(str(exc), EXIT_CAP) from None
    if not sats:
        raise CliError("no satisfying assignment", EXIT_UNSAT)
    return sats[0]


def _orders_for(formula, name):
    m = formula.num_clauses
    natural = tuple(range(m))
    if name == "natural":
        return [natural]
    if name == "natural+reverse":
        return [natural, tuple(reversed(natural))] if m >= 2 else [natural]
    if name == "all":
        if m > 6:
            raise CliError(f"refusing to enumerate {m}! clause orders (limit 6 clauses)", EXIT_CAP)
        return [tuple(p) for p in permutations(range(m))]
    raise CliError(f"unknown order set {name!r}", EXIT_INPUT)


def _emit(args, payload, table_renderer=None):
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = table_renderer(payload) if table_renderer else json.dumps(payload, indent=2)
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _assignment_string(assignment):
    return "".join("1" if v else "0" for v in assignment)


def _build_homology_complex(args):
    if args.model == "fixture":
        try:
            return load_fixture_complex(args.input)
        except (OSError, ValueError) as exc:
            raise CliError(f"{args.input}: {exc}", EXIT_INPUT) from None
    formula = _load_formula(args.input)
    try:
        if args.model in (MODEL_STEP, MODEL_REACHABILITY):
            if args.assignment:
                alpha = _parse_assignment(args.assignment, formula.num_vars)
                graph = build_config_graph(formula, assignment=alpha)
            else:
                graph = build_config_graph(formula, var_cap=args.var_cap)
            return build_complex(graph, args.max_degree, args.model,
                                 generator_cap=args.gen_cap)
        if args.model == MODEL_TRACE:
            alpha = _pick_assignment(formula, args, args.var_cap)
            orders = _orders_for(formula, args.orders)
            return build_trace_complex(formula, alpha, orders).complex
    except NotSatisfyingError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    except CapExceededError as exc:
        raise CliError(str(exc), EXIT_CAP) from None
    raise CliError(f"unknown model {args.model!r}", EXIT_INPUT)


def cmd_homology(args):
    complex_ = _build_homology_complex(args)
    violations = chaincomplex.validate(complex_)
    payload = {
        "input": Path(args.input).name,
        "model": args.model,
        "max_degree": args.max_degree,
        "valid": not violations,
        "violations": violations,
    }
    if violations:
        # homology of an invalid complex is undefined; report the failure
        payload["homology"] = None
    else:
        top = min(args.max_degree, complex_.max_degree)
        payload["homology"] = [
            {"degree": n,
             "betti": chaincomplex.homology_at(complex_, n).free_rank,
             "torsion": list(chaincomplex.homology_at(complex_, n).torsion)}
            for n in range(top + 1)
        ]

    def table(p):
        lines = [f"input: {p['input']}  model: {p['model']}"]
        if p["homology"] is None:
            lines.append(f"complex invalid at degrees {p['violations']}")
        else:
            for row in p["homology"]:
                torsion = " + ".join(f"Z/{t}" for t in row["torsion"])
                lines.append(f"H_{row['degree']}: betti={row['betti']}"
                             + (f" torsion={torsion}" if torsion else ""))
        return "\n".join(lines) + "\n"

    _emit(args, payload, table)
    return EXIT_OK


def cmd_gamma(args):
    formula = _load_formula(args.input)
    alpha = _pick_assignment(formula, args, args.var_cap)
    if formula.num_clauses < 2:
        _emit(args, {
            "input": Path(args.input).name,
            "degenerate": True,
            "note": "single clause order: natural equals reverse, the difference chain is zero",
        })
        return EXIT_OK
    try:
        gamma = gamma_cycle(formula, alpha)
    except (DegenerateGammaError, NotSatisfyingError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    complex_ = gamma.trace_complex.complex
    cycle = chaincomplex.is_cycle(complex_, gamma.chain)
    boundary, witness = chaincomplex.is_boundary(complex_, gamma.chain)

    orders = _orders_for(formula, args.orders)
    audited = build_trace_complex(formula, alpha, orders, include_splits=True)
    audit = {
        variant: {
            "triangles": len(audited.triangles),
            "violations": len(parity_boundary_audit(audited, variant)),
        }
        for variant in PARITY_VARIANTS
    }
    payload = {
        "input": Path(args.input).name,
        "assignment": _assignment_string(alpha),
        "parity_variant": args.parity_variant,
        "parity": str(parity_chain(gamma.trace_complex, gamma.chain, args.parity_variant)),
        "is_cycle": cycle,
        "is_boundary": boundary,
        "witness": None if witness is None else list(witness.coefficients),
        "parity_audit": audit,
    }

    def table(p):
        lines = [
            f"assignment: {p['assignment']}",
            f"parity({p['parity_variant']}): {p['parity']}",
            f"is_cycle: {p['is_cycle']}  is_boundary: {p['is_boundary']}",
        ]
        for variant, entry in p["parity_audit"].items():
            lines.append(f"audit[{variant}]: {entry['violations']} violations "
                         f"over {entry['triangles']} triangles")
        return "\n".join(lines) + "\n"

    _emit(args, payload, table)
    return EXIT_OK


def cmd_gen_ham(args):
    if args.n < 3:
        raise CliError("Hamiltonian encoding needs n >= 3", EXIT_INPUT)
    formula = hamiltonian_formula(args.n)
    mode = hamiltonian_encoding_mode(args.n)
    comments = [
        f"directed Hamiltonian cycle encoding for K_{args.n}",
        f"variables: ordered vertex pairs (i,j), i != j, lexicographic",
        f"constraints: {mode}",
    ]
    Path(args.output).write_text(format_dimacs(formula, comments), encoding="utf-8")
    return EXIT_OK


def cmd_homotopy(args):
    formula = _load_formula(args.input)
    if args.assignment:
        alpha = _parse_assignment(args.assignment, formula.num_vars)
    else:
        try:
            sats = satisfying_assignments(formula, var_cap=args.var_cap)
        except CapExceededError as exc:
            raise CliError(str(exc), EXIT_CAP) from None
        # a rejecting trace is just as deterministic as an accepting one
        alpha = sats[0] if sats else tuple([False] * formula.num_vars)
    graph = build_config_graph(formula, assignment=alpha)
    try:
        report = chain_homotopy_check(graph, args.max_degree, args.model)
    except NondeterministicGraphError as exc:
        raise CliError(str(exc), EXIT_NONDETERMINISTIC) from None
    payload = {
        "input": Path(args.input).name,
        "assignment": _assignment_string(alpha),
        "model": args.model,
        "identity_holds_everywhere": report.holds_everywhere(),
        "degrees": {str(d): entry for d, entry in sorted(report.degrees.items())},
    }

    def table(p):
        lines = [f"input: {p['input']}  assignment: {p['assignment']}"]
        for d, entry in p["degrees"].items():
            status = "holds" if entry["holds"] else f"fails ({entry['failures']}/{entry['generators']})"
            lines.append(f"degree {d}: {status}")
        return "\n".join(lines) + "\n"

    _emit(args, payload, table)
    return EXIT_OK


def cmd_parity_audit(args):
    formula = _load_formula(args.input)
    alpha = _pick_assignment(formula, args, args.var_cap)
    orders = _orders_for(formula, args.orders)
    audited = build_trace_complex(formula, alpha, orders, include_splits=True)
    variants = PARITY_VARIANTS if args.parity_variant == "both" else (args.parity_variant,)
    payload = {
        "input": Path(args.input).name,
        "assignment": _assignment_string(alpha),
        "orders": args.orders,
        "triangles": len(audited.triangles),
        "audits": {
            variant: [
                {"triangle": index, "parity": str(value)}
                for index, value in parity_boundary_audit(audited, variant)
            ]
            for variant in variants
        },
    }

    def table(p):
        lines = [f"triangles: {p['triangles']}"]
        for variant, violations in p["audits"].items():
            lines.append(f"{variant}: {len(violations)} violations")
        return "\n".join(lines) + "\n"

    _emit(args, payload, table)
    return EXIT_OK


def _claim(claim_id, location, claimed, computed, note=None):
    record = {
        "claim_id": claim_id,
        "paper_location": location,
        "claimed": claimed,
        "computed": computed,
        "status": "match" if claimed == computed else "mismatch",
    }
    if note:
        record["note"] = note
    return record


def _cross_check(complex_):
    """rank + nullity must equal the column count of every boundary matrix."""
    for n in range(1, complex_.max_degree + 1):
        d = complex_.boundary(n)
        if rank(d) + len(kernel_basis(d)) != d.cols:
            raise AssertionError(f"rank-nullity cross-check failed at degree {n}")


def _betti_list(complex_, top):
    return [chaincomplex.homology_at(complex_, n).free_rank for n in range(top + 1)]


def run_conformance(corpus_dir):
    corpus = Path(corpus_dir)
    required = [FIXTURE_CNF_SAT, FIXTURE_CNF_UNSAT, FIXTURE_COMPLEX]
    missing = [name for name in required if not (corpus / name).exists()]
    if missing:
        raise CliError(f"corpus {corpus} is missing fixtures: {', '.join(missing)}", EXIT_INPUT)

    phi = parse_dimacs((corpus / FIXTURE_CNF_SAT).read_text(encoding="utf-8"))
    psi = parse_dimacs((corpus / FIXTURE_CNF_UNSAT).read_text(encoding="utf-8"))
    claims = []

    # satisfying assignments of the worked example
    sats = satisfying_assignments(phi)
    claims.append(_claim(
        "worked-example-satisfying-count", "worked-example",
        claimed=3, computed=len(sats)))

    # homology of the shipped boundary-matrix fixture
    fixture_complex = load_fixture_complex(corpus / FIXTURE_COMPLEX)
    _cross_check(fixture_complex)
    fixture_betti = _betti_list(fixture_complex, 1)
    claims.append(_claim("worked-example-fixture-h0", "worked-example-matrix",
                         claimed=3, computed=fixture_betti[0]))
    claims.append(_claim("worked-example-fixture-h1", "worked-example-matrix",
                         claimed=2, computed=fixture_betti[1]))

    # step-model complex of the worked example
    graph = build_config_graph(phi)
    step2 = build_complex(graph, 2, MODEL_STEP)
    step_violations = chaincomplex.validate(step2)
    claims.append(_claim(
        "worked-example-step-validity", "boundary-well-defined",
        claimed="d.d = 0", computed=f"violations at degrees {step_violations}"
        if step_violations else "d.d = 0",
        note="interior faces of step walks leave the walk basis"))
    step1 = build_complex(graph, 1, MODEL_STEP)
    _cross_check(step1)
    step_betti = _betti_list(step1, 1)
    claims.append(_claim("worked-example-step-h0", "worked-example",
                         claimed=3, computed=step_betti[0]))
    claims.append(_claim(
        "worked-example-step-h1", "worked-example",
        claimed=2, computed=step_betti[1],
        note="degree capped at 1: the step model violates d.d = 0 at degree 2"))

    reach = build_complex(graph, 2, MODEL_REACHABILITY)
    _cross_check(reach)
    reach_betti = _betti_list(reach, 2)
    claims.append(_claim("worked-example-reachability-h0", "worked-example",
                         claimed=3, computed=reach_betti[0]))
    claims.append(_claim("worked-example-reachability-h1", "worked-example",
                         claimed=2, computed=reach_betti[1]))
    claims.append(_claim("worked-example-reachability-h2", "worked-example",
                         claimed=0, computed=reach_betti[2]))

    # the unsatisfiable example
    unsat_graph = build_config_graph(psi)
    unsat_complex = build_complex(unsat_graph, 2, MODEL_REACHABILITY)
    _cross_check(unsat_complex)
    unsat_betti = _betti_list(unsat_complex, 1)
    claims.append(_claim("unsat-example-h0", "unsat-example",
                         claimed=0, computed=unsat_betti[0]))
    claims.append(_claim("unsat-example-h1", "unsat-example",
                         claimed=1, computed=unsat_betti[1]))

    # verification-order cycle and its parity
    alpha = sats[0]
    gamma = gamma_cycle(phi, alpha)
    claims.append(_claim(
        "gamma-parity", "verification-parity",
        claimed="2", computed=str(parity_chain(gamma.trace_complex, gamma.chain))))
    claims.append(_claim(
        "gamma-is-cycle", "verification-parity",
        claimed=True,
        computed=chaincomplex.is_cycle(gamma.trace_complex.complex, gamma.chain)))
    boundary, _ = chaincomplex.is_boundary(gamma.trace_complex.complex, gamma.chain)
    claims.append(_claim("gamma-not-boundary", "verification-parity",
                         claimed=True, computed=not boundary))

    # parity annihilates boundaries?  audited over all orders with splits
    audited = build_trace_complex(phi, alpha,
                                  [tuple(p) for p in permutations(range(phi.num_clauses))],
                                  include_splits=True)
    for variant in PARITY_VARIANTS:
        violations = parity_boundary_audit(audited, variant)
        claims.append(_claim(
            f"parity-annihilates-boundaries-{variant}", "parity-lemma",
            claimed=0, computed=len(violations),
            note=f"over {len(audited.triangles)} triangles"))
    split_boundary, _ = chaincomplex.is_boundary(
        audited.complex, _gamma_chain_in(audited, phi.num_clauses))
    claims.append(_claim("gamma-not-boundary-split-complex", "verification-parity",
                         claimed=True, computed=not split_boundary))

    # contractibility identity on a deterministic clause-check trace
    det_graph = build_config_graph(phi, assignment=alpha)
    report = chain_homotopy_check(det_graph, 2, MODEL_STEP)
    claims.append(_claim(
        "contractibility-identity", "contractibility",
        claimed="d.s + s.d = id at all degrees",
        computed="holds" if report.holds_everywhere() else "fails at degrees "
        + ",".join(str(d) for d, e in sorted(report.degrees.items()) if not e["holds"])))

    # Hamiltonian cycle counting
    ham3 = hamiltonian_formula(3)
    count3 = len(satisfying_assignments(ham3))
    claims.append(_claim("hamiltonian-k3-directed-count", "cycle-counting",
                         claimed=2, computed=count3))
    claims.append(_claim(
        "hamiltonian-k3-half-factorial", "cycle-counting",
        claimed=1, computed=count3,
        note="(n-1)!/2 counts undirected cycles; the encoding counts directed ones"))

    claims.sort(key=lambda c: c["claim_id"])
    return {
        "corpus": [FIXTURE_CNF_SAT, FIXTURE_CNF_UNSAT, FIXTURE_COMPLEX],
        "cross_checks": "ok",
        "claims": claims,
    }


def _gamma_chain_in(trace_complex, num_clauses):
    natural = tuple(range(num_clauses))
    reverse = tuple(reversed(natural))
    index = {e.trace: i for i, e in enumerate(trace_complex.edges)}
    return Chain.from_dict(1, {index[natural]: 1, index[reverse]: -1})


def cmd_conformance(args):
    payload = run_conformance(args.corpus)

    def table(p):
        width = max(len(c["claim_id"]) for c in p["claims"])
        lines = []
        for c in p["claims"]:
            lines.append(f"{c['claim_id']:<{width}}  {c['status']:<8}  "
                         f"claimed={c['claimed']!r} computed={c['computed']!r}")
        return "\n".join(lines) + "\n"

    _emit(args, payload, table)
    return EXIT_OK


def _add_common(parser, orders_default="natural+reverse"):
    parser.add_argument("--format", choices=["json", "table"], default="json")
    parser.add_argument("--output", "-o", default=None)
    parser.add_argument("--assignment", default=None,
                        help="total assignment as a 0/1 string, most significant variable first")
    parser.add_argument("--var-cap", type=int, default=12,
                        help="brute-force variable cap (refusal, never truncation)")
    parser.add_argument("--gen-cap", type=int, default=DEFAULT_GENERATOR_CAP,
                        help="per-degree generator cap")
    parser.add_argument("--orders", choices=["natural", "natural+reverse", "all"],
                        default=orders_default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sathomology",
        description="Integer homology of SAT verifier computation graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="per-degree Betti numbers and torsion")
    p.add_argument("input")
    p.add_argument("--model", choices=[MODEL_STEP, MODEL_REACHABILITY, MODEL_TRACE, "fixture"],
                   default=MODEL_REACHABILITY)
    p.add_argument("--max-degree", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("gamma", help="verification-order cycle: parity, cycle and boundary status")
    p.add_argument("input")
    p.add_argument("--parity-variant", choices=list(PARITY_VARIANTS), default=VARIANT_ADJACENT)
    _add_common(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("gen-ham", help="emit a Hamiltonian-cycle CNF for K_n")
    p.add_argument("n", type=int)
    p.add_argument("output")
    p.set_defaults(func=cmd_gen_ham)

    p = sub.add_parser("homotopy", help="evaluate the contraction identity d.s + s.d = id")
    p.add_argument("input")
    p.add_argument("--model", choices=[MODEL_STEP, MODEL_REACHABILITY], default=MODEL_STEP)
    p.add_argument("--max-degree", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("parity-audit", help="parity of every triangle boundary")
    p.add_argument("input")
    p.add_argument("--parity-variant", choices=list(PARITY_VARIANTS) + ["both"], default="both")
    _add_common(p, orders_default="all")
    p.set_defaults(func=cmd_parity_audit)

    p = sub.add_parser("conformance", help="machine-check the registered claims over a corpus")
    p.add_argument("corpus", nargs="?", default=None,
                   help="fixture directory (defaults to the bundled corpus)")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_conformance)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "conformance" and args.corpus is None:
        args.corpus = str(bundled_fixture_dir())
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
