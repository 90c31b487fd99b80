"""Graded integer chain complexes and their homology.

A complex holds per-degree generator labels and the boundary matrices
d_n : C_n -> C_{n-1}.  Homology is reported over the integers as a free
rank (Betti number) plus a torsion divisibility chain, computed with
Smith normal form on exact integer matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .intlinalg import (
    IntMatrix,
    format_matrix_fixture,
    kernel_basis,
    read_matrix_fixture,
    snf,
    solve_integer,
)


class ComplexFormatError(ValueError):
    """Raised when a serialized complex cannot be parsed."""


class InvalidComplexError(ValueError):
    """Raised when an operation requires d.d = 0 but the complex violates it."""

    def __init__(self, violations):
        super().__init__(f"d.d != 0 at degrees {sorted(violations)}")
        self.violations = list(violations)


@dataclass(frozen=True)
class HomologyGroup:
    """Free rank plus torsion coefficients (each > 1, forming a divisibility chain)."""

    free_rank: int
    torsion: tuple = field(default_factory=tuple)

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def describe(self):
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}" if self.free_rank > 1 else "Z")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Chain:
    """Integer linear combination of degree-n generators, sparse by index."""

    degree: int
    coefficients: tuple  # ((generator_index, coefficient), ...), nonzero, sorted

    @classmethod
    def from_dict(cls, degree, coeffs):
        items = tuple(sorted((i, int(c)) for i, c in coeffs.items() if c))
        return cls(degree, items)

    def to_vector(self, length):
        vec = [0] * length
        for i, c in self.coefficients:
            if not 0 <= i < length:
                raise ValueError(f"coefficient index {i} out of range for {length} generators")
            vec[i] = c
        return tuple(vec)

    def is_zero(self):
        return not self.coefficients


class ChainComplex:
    """Bounded chain complex of free abelian groups with explicit bases.

    ``boundaries[n]`` is d_n for 1 <= n <= max_degree, of shape
    basis_size(n-1) x basis_size(n).  d_0 maps to the zero group and is
    implicit.  Degrees above max_degree are zero groups.
    """

    def __init__(self, generator_labels, boundaries):
        self.generator_labels = [list(labels) for labels in generator_labels]
        self.max_degree = len(self.generator_labels) - 1
        if self.max_degree < 0:
            raise ValueError("a complex needs at least degree 0 (possibly empty)")
        self.boundaries = dict(boundaries)
        for n in range(1, self.max_degree + 1):
            d = self.boundaries.get(n)
            if d is None:
                d = IntMatrix.zero(self.basis_size(n - 1), self.basis_size(n))
                self.boundaries[n] = d
            if d.rows != self.basis_size(n - 1) or d.cols != self.basis_size(n):
                raise ValueError(
                    f"boundary d_{n} has shape {d.rows}x{d.cols}, expected "
                    f"{self.basis_size(n - 1)}x{self.basis_size(n)}")
        for n in self.boundaries:
            if not 1 <= n <= self.max_degree:
                raise ValueError(f"boundary degree {n} outside 1..{self.max_degree}")

    def basis_size(self, n):
        if 0 <= n <= self.max_degree:
            return len(self.generator_labels[n])
        return 0

    def boundary(self, n):
        """d_n as a matrix; zero map outside 1..max_degree."""
        if 1 <= n <= self.max_degree:
            return self.boundaries[n]
        if n == self.max_degree + 1:
            return IntMatrix.zero(self.basis_size(self.max_degree), 0)
        return IntMatrix.zero(self.basis_size(n - 1), self.basis_size(n))

    def total_generators(self):
        return sum(self.basis_size(n) for n in range(self.max_degree + 1))


def validate(complex_):
    """Degrees n where d_{n-1} . d_n != 0; an empty list means a valid complex."""
    violations = []
    for n in range(2, complex_.max_degree + 1):
        if not complex_.boundary(n - 1).mul(complex_.boundary(n)).is_zero():
            violations.append(n)
    return violations


def homology_at(complex_, n):
    """H_n = ker d_n / im d_{n+1} over the integers.

    The free rank is nullity(d_n) - rank(d_{n+1}).  Torsion comes from the
    Smith form of d_{n+1} rewritten in a lattice basis of ker d_n; taking
    the Smith form of d_{n+1} alone would over-count.
    """
    if not 0 <= n <= complex_.max_degree:
        return HomologyGroup(0)
    violations = validate(complex_)
    if violations:
        raise InvalidComplexError(violations)

    size_n = complex_.basis_size(n)
    if n == 0:
        # d_0 = 0, so the kernel is all of C_0
        kernel = [tuple(1 if i == j else 0 for i in range(size_n)) for j in range(size_n)]
    else:
        kernel = kernel_basis(complex_.boundary(n))
    k = len(kernel)

    d_next = complex_.boundary(n + 1)
    if d_next.cols == 0 or k == 0:
        return HomologyGroup(k)

    # express each boundary image in the kernel lattice basis
    kernel_matrix = IntMatrix(size_n, k,
                              {(i, j): kernel[j][i]
                               for j in range(k) for i in range(size_n)
                               if kernel[j][i]})
    rewritten = {}
    for col in range(d_next.cols):
        image = tuple(d_next.get(i, col) for i in range(size_n))
        coords = solve_integer(kernel_matrix, image)
        if coords is None:
            raise InvalidComplexError([n + 1])
        for i, c in enumerate(coords):
            if c:
                rewritten[(i, col)] = c
    factors = snf(IntMatrix(k, d_next.cols, rewritten)).invariant_factors
    return HomologyGroup(k - len(factors), tuple(f for f in factors if f > 1))


def homology(complex_):
    """HomologyGroup at every degree 0..max_degree."""
    return [homology_at(complex_, n) for n in range(complex_.max_degree + 1)]


def is_cycle(complex_, chain):
    """True iff d_n applied to the chain vanishes exactly."""
    if not 0 <= chain.degree <= complex_.max_degree:
        raise ValueError(f"degree {chain.degree} out of range 0..{complex_.max_degree}")
    if chain.degree == 0:
        return True
    vec = chain.to_vector(complex_.basis_size(chain.degree))
    return all(x == 0 for x in complex_.boundary(chain.degree).mul_vec(vec))


def is_boundary(complex_, chain):
    """Whether the chain lies in the image of d_{n+1}.

    Returns (answer, witness): when the answer is True the witness is a
    degree n+1 chain with boundary equal to the input, verified by
    multiplication.  Non-cycles in a valid complex are never boundaries,
    but the membership test answers regardless.
    """
    n = chain.degree
    if not 0 <= n <= complex_.max_degree:
        raise ValueError(f"degree {n} out of range 0..{complex_.max_degree}")
    target = chain.to_vector(complex_.basis_size(n))
    if chain.is_zero():
        return True, Chain(n + 1, ())
    d_next = complex_.boundary(n + 1)
    if d_next.cols == 0:
        return False, None
    solution = solve_integer(d_next, target)
    if solution is None:
        return False, None
    assert d_next.mul_vec(solution) == tuple(target)
    witness = Chain.from_dict(n + 1, {i: c for i, c in enumerate(solution) if c})
    return True, witness


def euler_characteristic(complex_):
    return sum((-1) ** n * complex_.basis_size(n) for n in range(complex_.max_degree + 1))


def serialize_complex(complex_):
    """Single-file JSON form: labels per degree, boundaries as matrix fixtures."""
    payload = {
        "max_degree": complex_.max_degree,
        "generators": [[str(lbl) for lbl in labels] for labels in complex_.generator_labels],
        "boundaries": {
            str(n): format_matrix_fixture(complex_.boundary(n))
            for n in range(1, complex_.max_degree + 1)
            if not complex_.boundary(n).is_zero()
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def deserialize_complex(text):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(f"not valid JSON: {exc}") from None
    try:
        generators = payload["generators"]
        max_degree = payload["max_degree"]
    except (KeyError, TypeError):
        raise ComplexFormatError("missing 'generators' or 'max_degree'") from None
    if not isinstance(generators, list) or len(generators) != max_degree + 1:
        raise ComplexFormatError("'generators' must list labels for degrees 0..max_degree")
    boundaries = {}
    for key, text_matrix in payload.get("boundaries", {}).items():
        try:
            n = int(key)
        except ValueError:
            raise ComplexFormatError(f"boundary degree {key!r} is not an integer") from None
        boundaries[n] = read_matrix_fixture(text_matrix)
    try:
        return ChainComplex(generators, boundaries)
    except ValueError as exc:
        raise ComplexFormatError(str(exc)) from None


def homology_report(complex_):
    """JSON-ready per-degree report: {degree, betti, torsion[]}."""
    return [
        {"degree": n, "betti": group.free_rank, "torsion": list(group.torsion)}
        for n, group in enumerate(homology(complex_))
    ]
