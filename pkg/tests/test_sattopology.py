from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from sathomology import chaincomplex
from sathomology.chaincomplex import Chain
from sathomology.cnf import parse_dimacs, satisfying_assignments
from sathomology.pathcomplex import MODEL_REACHABILITY, MODEL_STEP, build_trace_complex
from sathomology.sattopology import (
    MODEL_TRACE,
    VARIANT_ADJACENT,
    VARIANT_ALL_PAIRS,
    DegenerateGammaError,
    NondeterministicGraphError,
    chain_homotopy_check,
    complexity_profile,
    gamma_cycle,
    hamiltonian_encoding_mode,
    hamiltonian_formula,
    hamiltonian_variables,
    parity,
    parity_boundary_audit,
    parity_chain,
)
from sathomology.verifier import ConfigGraph, build_config_graph

from oracles import directed_hamiltonian_cycles

PHI = parse_dimacs("p cnf 2 3\n1 2 0\n-1 2 0\n1 -2 0\n")


class TestParity:
    @pytest.mark.parametrize("variant", [VARIANT_ADJACENT, VARIANT_ALL_PAIRS])
    def test_monotone_traces(self, variant):
        assert parity((0, 1, 2), variant) == 1
        assert parity((5, 3, 1), variant) == -1

    @pytest.mark.parametrize("variant", [VARIANT_ADJACENT, VARIANT_ALL_PAIRS])
    def test_singleton_trace_is_vacuously_increasing(self, variant):
        assert parity((3,), variant) == 1

    def test_mixed_trace_adjacent(self):
        # (1, 3, 2): one ascent, one descent over 2 adjacent pairs
        assert parity((1, 3, 2), VARIANT_ADJACENT) == 0

    def test_mixed_trace_all_pairs(self):
        # pairs of (1, 3, 2): (1,3)+, (1,2)+, (3,2)-  ->  1/3
        assert parity((1, 3, 2), VARIANT_ALL_PAIRS) == Fraction(1, 3)

    def test_variants_can_disagree(self):
        trace = (0, 2, 1, 3)
        assert parity(trace, VARIANT_ADJACENT) == Fraction(1, 3)
        assert parity(trace, VARIANT_ALL_PAIRS) == Fraction(2, 3)

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            parity(())

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            parity((1, 3, 2), "median")

    @settings(max_examples=60)
    @given(st.permutations(list(range(4))))
    def test_parity_bounded_and_antisymmetric(self, order):
        trace = tuple(order)
        for variant in (VARIANT_ADJACENT, VARIANT_ALL_PAIRS):
            value = parity(trace, variant)
            assert -1 <= value <= 1
            assert parity(tuple(reversed(trace)), variant) == -value


class TestParityChain:
    def setup_method(self):
        self.tc = build_trace_complex(PHI, (True, True), [(0, 1, 2), (2, 1, 0)])

    def test_linearity(self):
        e0 = Chain.from_dict(1, {0: 1})
        e1 = Chain.from_dict(1, {1: 1})
        combo = Chain.from_dict(1, {0: 3, 1: -2})
        assert (parity_chain(self.tc, combo)
                == 3 * parity_chain(self.tc, e0) - 2 * parity_chain(self.tc, e1))

    def test_degree_checked(self):
        with pytest.raises(ValueError):
            parity_chain(self.tc, Chain.from_dict(0, {0: 1}))


class TestGammaCycle:
    def test_gamma_properties(self):
        gamma = gamma_cycle(PHI, (True, True))
        assert gamma.natural_order == (0, 1, 2)
        assert gamma.reverse_order == (2, 1, 0)
        complex_ = gamma.trace_complex.complex
        assert chaincomplex.is_cycle(complex_, gamma.chain)
        assert chaincomplex.is_boundary(complex_, gamma.chain) == (False, None)

    def test_gamma_parity_is_two(self):
        gamma = gamma_cycle(PHI, (True, True))
        for variant in (VARIANT_ADJACENT, VARIANT_ALL_PAIRS):
            assert parity_chain(gamma.trace_complex, gamma.chain, variant) == 2

    def test_single_clause_degenerates(self):
        f = parse_dimacs("p cnf 1 1\n1 0\n")
        with pytest.raises(DegenerateGammaError):
            gamma_cycle(f, (True,))

    def test_gamma_survives_in_split_complex(self):
        # still not a boundary when every split edge and triangle is present
        orders = [tuple(p) for p in permutations(range(3))]
        tc = build_trace_complex(PHI, (True, True), orders, include_splits=True)
        index = {e.trace: i for i, e in enumerate(tc.edges)}
        chain = Chain.from_dict(1, {index[(0, 1, 2)]: 1, index[(2, 1, 0)]: -1})
        assert chaincomplex.is_cycle(tc.complex, chain)
        assert chaincomplex.is_boundary(tc.complex, chain) == (False, None)


class TestParityBoundaryAudit:
    def test_no_triangles_no_violations(self):
        tc = build_trace_complex(PHI, (True, True), [(0, 1, 2), (2, 1, 0)])
        assert parity_boundary_audit(tc) == []

    def test_split_complex_violation_counts(self):
        orders = [tuple(p) for p in permutations(range(3))]
        tc = build_trace_complex(PHI, (True, True), orders, include_splits=True)
        assert len(parity_boundary_audit(tc, VARIANT_ADJACENT)) == 20
        assert len(parity_boundary_audit(tc, VARIANT_ALL_PAIRS)) == 24

    def test_violation_values_are_exact(self):
        orders = [tuple(p) for p in permutations(range(3))]
        tc = build_trace_complex(PHI, (True, True), orders, include_splits=True)
        for index, value in parity_boundary_audit(tc, VARIANT_ADJACENT):
            tri = tc.triangles[index]
            expected = (parity(tc.edges[tri.edge_ab])
                        + parity(tc.edges[tri.edge_bc])
                        - parity(tc.edges[tri.edge_ac]))
            assert value == expected != 0


class TestHamiltonianEncoding:
    def test_variable_layout(self):
        assert hamiltonian_variables(3) == [
            (1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]

    def test_encoding_mode_switch(self):
        assert hamiltonian_encoding_mode(4) == "subcycle-excluded"
        assert hamiltonian_encoding_mode(5) == "degree-only"

    def test_n_too_small(self):
        with pytest.raises(ValueError):
            hamiltonian_formula(2)

    @pytest.mark.parametrize("n", [3, 4])
    def test_model_count_matches_cycle_enumeration(self, n):
        formula = hamiltonian_formula(n)
        models = satisfying_assignments(formula)
        pairs = hamiltonian_variables(n)
        found = {
            frozenset(pairs[k] for k, bit in enumerate(model) if bit)
            for model in models
        }
        assert found == directed_hamiltonian_cycles(n)

    def test_directed_counts(self):
        assert len(satisfying_assignments(hamiltonian_formula(3))) == 2
        assert len(satisfying_assignments(hamiltonian_formula(4))) == 6


class TestChainHomotopy:
    def test_rejects_nondeterministic_graph(self):
        g = ConfigGraph(time_bound=3)
        g.nodes, g.times = [0, 1, 2], [0, 1, 1]
        g.add_edge(0, 1, "step")
        g.add_edge(0, 2, "step")
        with pytest.raises(NondeterministicGraphError):
            chain_homotopy_check(g, 1)

    def test_residuals_reported_per_degree(self):
        graph = build_config_graph(PHI, assignment=(True, True))
        report = chain_homotopy_check(graph, 2, MODEL_STEP)
        assert sorted(report.degrees) == [0, 1, 2]
        for entry in report.degrees.values():
            assert entry["failures"] <= entry["generators"]
            assert entry["holds"] == (entry["failures"] == 0)
        assert not report.holds_everywhere()

    def test_identity_fails_on_terminal_vertex(self):
        # s vanishes on the terminal configuration, so (d.s + s.d - id)
        # evaluates to minus that generator: an honest counterexample
        graph = build_config_graph(PHI, assignment=(True, True))
        report = chain_homotopy_check(graph, 0, MODEL_STEP)
        entry = report.degrees[0]
        assert entry["failures"] >= 1
        assert entry["counterexample"] is not None


class TestComplexityProfile:
    def test_reachability_profile(self):
        profile = complexity_profile(PHI, MODEL_REACHABILITY, 2, formula_id="phi")
        assert [g.free_rank for g in profile.groups] == [1, 0, 4]
        assert profile.h_value == 2
        assert profile.at_cap
        assert profile.h_display() == ">=2"

    def test_trace_profile_on_unsat_formula(self):
        psi = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
        profile = complexity_profile(psi, MODEL_TRACE, 1, formula_id="psi")
        assert all(g.is_trivial() for g in profile.groups)
        assert profile.h_display() == "0"

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError):
            complexity_profile(PHI, "mystery", 1)
