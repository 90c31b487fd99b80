"""Acceptance gate: one criterion per test, one printed PASS/FAIL line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines inline.
Criteria marked as findings record their outcome without asserting it;
criteria with exact expectations assert them.
"""

import json
import random
import time
from itertools import permutations
from pathlib import Path

import pytest

from sathomology import chaincomplex
from sathomology.chaincomplex import Chain, ChainComplex
from sathomology.cli import bundled_fixture_dir, main, run_conformance
from sathomology.cnf import CnfFormula, parse_dimacs, satisfying_assignments
from sathomology.intlinalg import IntMatrix, rank, snf
from sathomology.pathcomplex import (
    MODEL_REACHABILITY,
    MODEL_STEP,
    build_complex,
    build_trace_complex,
)
from sathomology.sattopology import (
    PARITY_VARIANTS,
    VARIANT_ADJACENT,
    chain_homotopy_check,
    gamma_cycle,
    hamiltonian_formula,
    hamiltonian_variables,
    parity_boundary_audit,
    parity_chain,
)
from sathomology.verifier import build_config_graph

from oracles import bareiss_det, directed_hamiltonian_cycles, rational_rank

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "sathomology" / "fixtures"
PHI = parse_dimacs((FIXTURES / "two_var_example.cnf").read_text())
PSI = parse_dimacs((FIXTURES / "contradiction.cnf").read_text())


def report(criterion, ok, detail=""):
    line = f"{criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    return ok


def random_formula(rng):
    num_vars = rng.randint(1, 3)
    num_clauses = rng.randint(1, 4)
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, 3)
        lits = []
        for _ in range(width):
            v = rng.randint(1, num_vars)
            lits.append(v if rng.random() < 0.5 else -v)
        clauses.append(tuple(lits))
    return CnfFormula(num_vars, tuple(clauses))


@pytest.mark.parametrize("model", [MODEL_STEP, MODEL_REACHABILITY, "trace"])
def test_a1_boundary_squares_to_zero(model):
    """A1: d.d = 0 across a randomized corpus, per complex model."""
    rng = random.Random(20260823)
    start = time.monotonic()
    bad = 0
    checked = 0
    example = None
    for _ in range(200):
        formula = random_formula(rng)
        if model == "trace":
            sats = satisfying_assignments(formula)
            if not sats:
                continue
            orders = [tuple(range(formula.num_clauses))]
            if formula.num_clauses >= 2:
                orders.append(tuple(reversed(orders[0])))
            complex_ = build_trace_complex(
                formula, sats[0], orders, include_splits=True).complex
        else:
            graph = build_config_graph(formula)
            complex_ = build_complex(graph, 2, model)
        violations = chaincomplex.validate(complex_)
        checked += 1
        if violations:
            bad += 1
            if example is None:
                example = (formula.clauses, violations)
    elapsed = time.monotonic() - start
    ok = bad == 0 and elapsed < 60
    detail = f"{checked} formulas, {bad} with violations, {elapsed:.1f}s"
    if example is not None:
        detail += f"; first: clauses={example[0]} degrees={example[1]}"
    report(f"A1[{model}]", ok, detail)
    assert ok


def test_a2_smith_normal_form_soundness():
    rng = random.Random(4242)
    start = time.monotonic()
    failures = 0
    for _ in range(500):
        m, n = rng.randint(1, 10), rng.randint(1, 10)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        A = IntMatrix.from_rows(rows)
        dec = snf(A)
        factors = dec.invariant_factors
        good = (dec.U.mul(A).mul(dec.V) == dec.D
                and abs(bareiss_det(dec.U.to_rows())) == 1
                and abs(bareiss_det(dec.V.to_rows())) == 1
                and all(f > 0 for f in factors)
                and all(b % a == 0 for a, b in zip(factors, factors[1:]))
                and len(factors) == rational_rank(rows))
        if not good:
            failures += 1
    elapsed = time.monotonic() - start
    ok = failures == 0 and elapsed < 30
    report("A2", ok, f"500 matrices, {failures} failures, {elapsed:.1f}s")
    assert ok


def test_a3_known_space_homology():
    circle = ChainComplex(
        [["a", "b"], ["e1", "e2"]],
        {1: IntMatrix.from_rows([[-1, -1], [1, 1]])})
    triangle = ChainComplex(
        [["a", "b", "c"], ["ab", "bc", "ac"], ["abc"]],
        {1: IntMatrix.from_rows([[-1, 0, -1], [1, -1, 0], [0, 1, 1]]),
         2: IntMatrix.from_rows([[1], [1], [-1]])})
    point = ChainComplex([["pt"]], {})
    results = {
        "circle": [g.free_rank for g in chaincomplex.homology(circle)],
        "triangle": [g.free_rank for g in chaincomplex.homology(triangle)],
        "point": [g.free_rank for g in chaincomplex.homology(point)],
    }
    ok = (results["circle"] == [1, 1]
          and results["triangle"] == [1, 0, 0]
          and results["point"] == [1])
    report("A3", ok, str(results))
    assert ok


def satisfiable_fixtures_with_two_clauses():
    out = [("two_var_example", PHI, satisfying_assignments(PHI)[0])]
    ham3 = hamiltonian_formula(3)
    out.append(("hamiltonian_k3", ham3, satisfying_assignments(ham3)[0]))
    return out


def test_a4_gamma_cycle_properties():
    failures = []
    for name, formula, alpha in satisfiable_fixtures_with_two_clauses():
        gamma = gamma_cycle(formula, alpha)
        if not chaincomplex.is_cycle(gamma.trace_complex.complex, gamma.chain):
            failures.append(f"{name}: not a cycle")
        if parity_chain(gamma.trace_complex, gamma.chain, VARIANT_ADJACENT) != 2:
            failures.append(f"{name}: parity != 2")
    ok = not failures
    report("A4", ok, "; ".join(failures) or "all satisfiable fixtures")
    assert ok


def test_a5_parity_boundary_audit():
    """A5: the audit must be exhaustive; its outcome is a recorded finding."""
    findings = []
    complete = True
    for name, formula, alpha in satisfiable_fixtures_with_two_clauses():
        m = formula.num_clauses
        if m <= 3:
            orders = [tuple(p) for p in permutations(range(m))]
        else:
            orders = [tuple(range(m)), tuple(reversed(range(m)))]
        tc = build_trace_complex(formula, alpha, orders, include_splits=True)
        for variant in PARITY_VARIANTS:
            audit = parity_boundary_audit(tc, variant)
            indexes = [i for i, _ in audit]
            if not (len(set(indexes)) == len(indexes)
                    and all(0 <= i < len(tc.triangles) for i in indexes)
                    and all(value != 0 for _, value in audit)):
                complete = False
            findings.append(f"{name}/{variant}: {len(audit)}/{len(tc.triangles)}")
            if not audit:
                gamma = gamma_cycle(formula, alpha)
                bounded, _ = chaincomplex.is_boundary(
                    gamma.trace_complex.complex, gamma.chain)
                if bounded:
                    complete = False
    report("A5", complete, "violations " + ", ".join(findings))
    assert complete


def test_a6_conformance_report():
    start = time.monotonic()
    payload = run_conformance(bundled_fixture_dir())
    elapsed = time.monotonic() - start
    required_ids = {
        "worked-example-fixture-h0", "worked-example-fixture-h1",
        "worked-example-step-h0", "worked-example-step-h1",
        "worked-example-step-validity", "unsat-example-h0", "unsat-example-h1",
        "gamma-parity", "gamma-is-cycle", "gamma-not-boundary",
        "contractibility-identity", "hamiltonian-k3-directed-count",
    }
    ids = {c["claim_id"] for c in payload["claims"]}
    keys_ok = all(
        {"claim_id", "paper_location", "claimed", "computed", "status"} <= set(c)
        and c["status"] in ("match", "mismatch")
        for c in payload["claims"])
    ok = (required_ids <= ids
          and keys_ok
          and payload["cross_checks"] == "ok"
          and elapsed < 10)
    matches = sum(c["status"] == "match" for c in payload["claims"])
    report("A6", ok,
           f"{len(payload['claims'])} claims, {matches} match, "
           f"cross-checks {payload['cross_checks']}, {elapsed:.1f}s")
    assert ok


def test_a7_chain_homotopy_report():
    complete = True
    findings = []
    cases = [("two_var_example", PHI, satisfying_assignments(PHI)[0]),
             ("contradiction", PSI, (False,))]
    for name, formula, alpha in cases:
        graph = build_config_graph(formula, assignment=alpha)
        report_ = chain_homotopy_check(graph, 2, MODEL_STEP)
        if sorted(report_.degrees) != [0, 1, 2]:
            complete = False
        for degree, entry in report_.degrees.items():
            if not (0 <= entry["failures"] <= entry["generators"]):
                complete = False
            cex = entry["counterexample"]
            if cex is not None and not all(
                    isinstance(v, int) for v in cex["residual"].values()):
                complete = False
        holds = report_.holds_everywhere()
        findings.append(f"{name}: identity {'holds' if holds else 'fails'}")
    report("A7", complete, "; ".join(findings))
    assert complete


def test_a8_hamiltonian_counts():
    start = time.monotonic()
    ok = True
    details = []
    for n, expected in ((3, 2), (4, 6)):
        formula = hamiltonian_formula(n)
        models = satisfying_assignments(formula)
        pairs = hamiltonian_variables(n)
        found = {frozenset(pairs[k] for k, bit in enumerate(a) if bit)
                 for a in models}
        oracle = directed_hamiltonian_cycles(n)
        if len(models) != expected or found != oracle:
            ok = False
        details.append(f"K{n}: {len(models)} models, oracle {len(oracle)}")
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 10
    report("A8", ok, "; ".join(details) + f", {elapsed:.1f}s")
    assert ok


def test_a9_deterministic_output(tmp_path):
    phi_path = str(FIXTURES / "two_var_example.cnf")
    identical = True
    for label, argv in (
            ("homology", ["homology", phi_path]),
            ("conformance", ["conformance"])):
        a, b = tmp_path / f"{label}_a.json", tmp_path / f"{label}_b.json"
        assert main(argv + ["-o", str(a)]) == 0
        assert main(argv + ["-o", str(b)]) == 0
        if a.read_bytes() != b.read_bytes():
            identical = False
        json.loads(a.read_text())  # well-formed JSON, not just stable bytes
    report("A9", identical, "byte-identical repeated runs")
    assert identical
