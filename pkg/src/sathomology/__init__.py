"""Exact integer homology of SAT verifier computation graphs.

Builds chain complexes from clause-checking verifier traces, computes
integer homology via Smith normal form, constructs verification-order
cycles with their parity invariant, and machine-checks a registry of
claimed identities, reporting agreement or discrepancy.
"""

from .intlinalg import IntMatrix, SmithDecomposition, snf, rank, kernel_basis, solve_integer
from .chaincomplex import (
    Chain,
    ChainComplex,
    HomologyGroup,
    homology,
    homology_at,
    is_boundary,
    is_cycle,
    validate,
)
from .cnf import CnfFormula, evaluate, parse_dimacs, satisfying_assignments
from .verifier import ConfigGraph, VerifierConfig, build_config_graph, verification_trace
from .pathcomplex import (
    ComputationPath,
    PathBasis,
    TraceDecoratedEdge,
    boundary_matrix,
    build_complex,
    build_trace_complex,
    enumerate_paths,
    load_fixture_complex,
)
from .sattopology import (
    ComplexityProfile,
    GammaCycle,
    HomotopyReport,
    chain_homotopy_check,
    complexity_profile,
    gamma_cycle,
    hamiltonian_formula,
    parity,
    parity_boundary_audit,
    parity_chain,
)

__version__ = "0.1.0"
