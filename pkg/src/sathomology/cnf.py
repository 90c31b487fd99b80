"""CNF formulas, DIMACS parsing, and brute-force assignment enumeration.

Clause order is semantically meaningful throughout this package (the
verification-order functional depends on it), so parsing preserves the
clause order of the file exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

DEFAULT_VAR_CAP = 20


class DimacsParseError(ValueError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapExceededError(RuntimeError):
    """Raised instead of truncating when a brute-force cap would be exceeded."""


@dataclass(frozen=True)
class CnfFormula:
    """CNF formula; clauses are tuples of nonzero DIMACS literals."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")

    @property
    def num_clauses(self):
        return len(self.clauses)


def parse_dimacs(text):
    """Parse DIMACS CNF text, preserving clause order bit-exactly."""
    num_vars = num_clauses = None
    clauses = []
    current = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError("malformed problem line, expected 'p cnf <vars> <clauses>'", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError("non-integer counts in problem line", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsParseError("negative counts in problem line", lineno)
            continue
        if num_vars is None:
            raise DimacsParseError("clause data before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"invalid literal {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsParseError(f"literal {lit} exceeds variable count {num_vars}", lineno)
                current.append(lit)
    last_line = len(text.splitlines())
    if num_vars is None:
        raise DimacsParseError("missing problem line", max(last_line, 1))
    if current:
        raise DimacsParseError("clause missing terminating 0", max(last_line, 1))
    if len(clauses) != num_clauses:
        raise DimacsParseError(
            f"expected {num_clauses} clauses, found {len(clauses)}", max(last_line, 1))
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs(formula, comments=()):
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def literal_satisfied(lit, assignment):
    value = assignment[abs(lit) - 1]
    return value if lit > 0 else not value


def clause_satisfied(clause, assignment):
    return any(literal_satisfied(lit, assignment) for lit in clause)


def evaluate(formula, assignment):
    """True iff every clause has a satisfied literal (vacuously true for no clauses)."""
    if len(assignment) != formula.num_vars:
        raise ValueError(f"assignment length {len(assignment)} != {formula.num_vars} variables")
    return all(clause_satisfied(clause, assignment) for clause in formula.clauses)


def satisfying_assignments(formula, var_cap=DEFAULT_VAR_CAP):
    """All satisfying assignments in lexicographic order (False < True)."""
    if formula.num_vars > var_cap:
        raise CapExceededError(
            f"{formula.num_vars} variables exceeds brute-force cap {var_cap}")
    return [assignment
            for assignment in product((False, True), repeat=formula.num_vars)
            if evaluate(formula, assignment)]
