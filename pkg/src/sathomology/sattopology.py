"""Verification-order cycles, the parity functional, the Hamiltonian-cycle
formula family, the contractibility homotopy check, and homological
complexity profiles.

Parity values are exact rationals (``fractions.Fraction``), always in
canonical reduced form.  Two normalization variants are implemented:

* ``adjacent-pairs``: sum of sign(next - prev) over consecutive trace
  entries, divided by the number of adjacent pairs;
* ``all-pairs``: sum of sign contributions over all position pairs,
  divided by C(k, 2) for a k-entry trace.

Both send strictly increasing traces to +1 and strictly decreasing traces
to -1.  A single-entry trace is vacuously strictly increasing and scores
+1 (the monotone rules are checked before the mixed-order formula, which
would divide by zero there).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import chaincomplex
from .chaincomplex import Chain, HomologyGroup
from .cnf import CnfFormula, satisfying_assignments
from .pathcomplex import (
    MODEL_REACHABILITY,
    MODEL_STEP,
    TraceDecoratedEdge,
    build_complex,
    build_trace_complex,
    enumerate_paths,
)
from .verifier import build_config_graph

VARIANT_ADJACENT = "adjacent-pairs"
VARIANT_ALL_PAIRS = "all-pairs"
PARITY_VARIANTS = (VARIANT_ADJACENT, VARIANT_ALL_PAIRS)

MODEL_TRACE = "trace"


class DegenerateGammaError(ValueError):
    """Single-clause formulas make natural and reverse orders coincide."""


class NondeterministicGraphError(ValueError):
    """The homotopy construction needs a unique successor per configuration."""


def _sign(x):
    return (x > 0) - (x < 0)


def parity(edge, variant=VARIANT_ADJACENT):
    """Verification-order parity of one trace-decorated edge, as a Fraction."""
    trace = edge.trace if isinstance(edge, TraceDecoratedEdge) else tuple(edge)
    if not trace:
        raise ValueError("parity is undefined on an empty trace")
    if all(a < b for a, b in zip(trace, trace[1:])):
        return Fraction(1)
    if all(a > b for a, b in zip(trace, trace[1:])):
        return Fraction(-1)
    if variant == VARIANT_ADJACENT:
        total = sum(_sign(b - a) for a, b in zip(trace, trace[1:]))
        return Fraction(total, len(trace) - 1)
    if variant == VARIANT_ALL_PAIRS:
        total = sum(_sign(b - a) for a, b in combinations(trace, 2))
        pairs = len(trace) * (len(trace) - 1) // 2
        return Fraction(total, pairs)
    raise ValueError(f"unknown parity variant {variant!r}")


def parity_chain(trace_complex, chain, variant=VARIANT_ADJACENT):
    """Linear extension of parity to degree-1 chains of a trace complex."""
    if chain.degree != 1:
        raise ValueError(f"parity extends to degree-1 chains only, got degree {chain.degree}")
    total = Fraction(0)
    for index, coeff in chain.coefficients:
        total += coeff * parity(trace_complex.edges[index], variant)
    return total


def parity_boundary_audit(trace_complex, variant=VARIANT_ADJACENT):
    """Parity of every degree-2 generator's boundary.

    Returns [(triangle_index, parity_value)] for triangles where the
    parity is nonzero.  An empty list machine-checks the claim that the
    parity functional annihilates boundaries; a nonempty list is a
    documented discrepancy, not an error.
    """
    violations = []
    for index, tri in enumerate(trace_complex.triangles):
        edges = trace_complex.edges
        value = (parity(edges[tri.edge_ab], variant)
                 + parity(edges[tri.edge_bc], variant)
                 - parity(edges[tri.edge_ac], variant))
        if value != 0:
            violations.append((index, value))
    return violations


@dataclass(frozen=True)
class GammaCycle:
    """The 1-chain (natural-order edge) - (reverse-order edge)."""

    chain: Chain
    natural_order: tuple
    reverse_order: tuple
    trace_complex: object


def gamma_cycle(formula, assignment):
    """Difference of natural- and reverse-order verification edges.

    Requires a satisfying assignment and at least two clauses; with a
    single clause the two orders coincide and the chain degenerates to
    zero, which is reported as a refusal rather than returned.
    """
    m = formula.num_clauses
    if m < 2:
        raise DegenerateGammaError(
            "natural and reverse orders coincide for fewer than 2 clauses; "
            "the difference chain is degenerately zero")
    natural = tuple(range(m))
    reverse = tuple(reversed(natural))
    tc = build_trace_complex(formula, assignment, [natural, reverse])
    index = {e.trace: i for i, e in enumerate(tc.edges)}
    chain = Chain.from_dict(1, {index[natural]: 1, index[reverse]: -1})
    assert chaincomplex.is_cycle(tc.complex, chain)
    return GammaCycle(chain, natural, reverse, tc)


def hamiltonian_variables(n):
    """Ordered pairs (i, j), i != j, 1-based, in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def hamiltonian_encoding_mode(n):
    """Sub-cycle exclusion is spelled out only where it is tractable."""
    return "subcycle-excluded" if n <= 4 else "degree-only"


def hamiltonian_formula(n):
    """CNF encoding of a directed Hamiltonian cycle in the complete graph K_n.

    Variables select directed edges; clauses force exactly one outgoing
    and exactly one incoming edge per vertex.  For n <= 4 explicit
    2-cycle exclusion clauses rule out disjoint sub-cycles (sufficient at
    that size); for n >= 5 only the degree constraints are emitted.
    """
    if n < 3:
        raise ValueError("Hamiltonian encoding needs n >= 3")
    pairs = hamiltonian_variables(n)
    var = {pair: k + 1 for k, pair in enumerate(pairs)}
    clauses = []
    for v in range(1, n + 1):
        outgoing = [var[(v, w)] for w in range(1, n + 1) if w != v]
        incoming = [var[(w, v)] for w in range(1, n + 1) if w != v]
        clauses.append(tuple(outgoing))
        clauses.extend((-a, -b) for a, b in combinations(outgoing, 2))
        clauses.append(tuple(incoming))
        clauses.extend((-a, -b) for a, b in combinations(incoming, 2))
    if n <= 4:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                clauses.append((-var[(i, j)], -var[(j, i)]))
    return CnfFormula(len(pairs), tuple(clauses))


@dataclass
class HomotopyReport:
    """Per-degree outcome of the d.s + s.d = id check."""

    degrees: dict  # degree -> {"holds": bool, "failures": int, "counterexample": ...}

    def holds_everywhere(self):
        return all(entry["holds"] for entry in self.degrees.values())


def chain_homotopy_check(graph, max_degree, model=MODEL_STEP):
    """Evaluate the canonical contraction on a deterministic computation graph.

    The contraction s sends a path ending in a configuration with no
    successor to zero and otherwise extends the path by the unique next
    configuration, signed by (-1)^degree.  For every generator g up to
    ``max_degree`` the residual (d.s + s.d)(g) - g is computed exactly
    and reported per degree; a nonzero residual is a finding, not an
    error.

    Refuses graphs where any configuration has two or more successors.
    """
    successor = {}
    for src, dst, _ in graph.edges:
        seen = successor.get(src)
        if seen is not None and seen != dst:
            raise NondeterministicGraphError(
                f"configuration {src} has successors {seen} and {dst}")
        successor[src] = dst

    bases = enumerate_paths(graph, max_degree + 1, model)
    indexes = [basis.index() for basis in bases]

    def s_of(path, degree):
        nxt = successor.get(path.config_ids[-1])
        if nxt is None:
            return None
        extended = type(path)(path.config_ids + (nxt,))
        if extended not in indexes[degree + 1]:
            return None
        return ((-1) ** degree, extended)

    def d_of(path, degree):
        faces = []
        if degree == 0:
            return faces
        for i in range(len(path.config_ids)):
            face = path.face(i)
            if face in indexes[degree - 1]:
                faces.append(((-1) ** i, face))
        return faces

    report = {}
    for degree in range(max_degree + 1):
        failures = 0
        counterexample = None
        for g in bases[degree].generators:
            residual = {g: -1}

            def accumulate(path, coeff):
                residual[path] = residual.get(path, 0) + coeff

            sg = s_of(g, degree)
            if sg is not None:
                sign, extended = sg
                for fsign, face in d_of(extended, degree + 1):
                    accumulate(face, sign * fsign)
            for fsign, face in d_of(g, degree):
                sface = s_of(face, degree - 1)
                if sface is not None:
                    ssign, lifted = sface
                    accumulate(lifted, fsign * ssign)

            residual = {p: c for p, c in residual.items() if c}
            if residual:
                failures += 1
                if counterexample is None:
                    counterexample = {
                        "generator": g.label(),
                        "residual": {p.label(): c for p, c in sorted(
                            residual.items(), key=lambda kv: kv[0].config_ids)},
                    }
        report[degree] = {
            "holds": failures == 0,
            "failures": failures,
            "generators": len(bases[degree].generators),
            "counterexample": counterexample,
        }
    return HomotopyReport(report)


@dataclass
class ComplexityProfile:
    """Homology at every degree up to a cap, plus the top nonzero degree."""

    formula_id: str
    groups: list  # HomologyGroup per degree 0..cap
    h_value: int
    at_cap: bool

    def h_display(self):
        return f">={self.h_value}" if self.at_cap else str(self.h_value)


def complexity_profile(formula, model, max_degree, formula_id="formula",
                       orders=None, var_cap=None, generator_cap=None):
    """Homology profile of a formula's computation complex under one model.

    The top-nonzero-degree statistic is reported with an explicit marker
    when the cap itself has nonzero homology, since nothing above the cap
    was computed.
    """
    kwargs = {}
    if generator_cap is not None:
        kwargs["generator_cap"] = generator_cap
    if model in (MODEL_STEP, MODEL_REACHABILITY):
        graph_kwargs = {"var_cap": var_cap} if var_cap is not None else {}
        graph = build_config_graph(formula, **graph_kwargs)
        complex_ = build_complex(graph, max_degree, model, **kwargs)
    elif model == MODEL_TRACE:
        sats = satisfying_assignments(formula, **({"var_cap": var_cap} if var_cap else {}))
        if not sats:
            complex_ = build_trace_complex_for_unsat()
        else:
            if orders is None:
                m = formula.num_clauses
                orders = [tuple(range(m))]
                if m >= 2:
                    orders.append(tuple(reversed(range(m))))
            complex_ = build_trace_complex(formula, sats[0], orders).complex
    else:
        raise ValueError(f"unknown model {model!r}")

    groups = [chaincomplex.homology_at(complex_, n) for n in range(max_degree + 1)]
    nonzero = [n for n, g in enumerate(groups) if not g.is_trivial()]
    h_value = max([n for n in nonzero if n > 0], default=0)
    # nothing above the cap was computed, so a nonzero top degree leaves
    # the true maximum unknown
    at_cap = not groups[max_degree].is_trivial()
    return ComplexityProfile(formula_id, groups, h_value, at_cap)


def build_trace_complex_for_unsat():
    """Unsatisfiable formulas admit no verification edges: the zero complex."""
    return chaincomplex.ChainComplex([[]], {})
