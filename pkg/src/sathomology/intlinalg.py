"""Exact sparse integer linear algebra.

Everything here is over the integers with arbitrary precision: Smith
normal form with unimodular transform witnesses, ranks, integer kernel
lattice bases, and integer linear-system solving.  These are the
primitives every homology computation in this package reduces to.

All operations are pure: matrices are treated as immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class FixtureFormatError(ValueError):
    """Raised when a matrix fixture file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntMatrix:
    """Sparse integer matrix keyed by (row, col); zero entries never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry index ({i}, {j}) out of bounds for {rows}x{cols}")
            v = int(v)
            if v != 0:
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged row data")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = int(v)
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    def get(self, i, j):
        return self.entries.get((i, j), 0)

    def to_rows(self):
        data = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        # group other's entries by row for sparse traversal
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) + a * b
        return IntMatrix(self.rows, other.cols, acc)

    def mul_vec(self, vec):
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} does not match {self.cols} columns")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return tuple(out)

    def is_diagonal(self):
        return all(i == j for (i, j) in self.entries)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, IntMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal.

    ``invariant_factors`` are the positive diagonal entries of D in order;
    each divides the next.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple = field(default_factory=tuple)


def snf(A):
    """Smith normal form of A with unimodular witnesses.

    Diagonalization by integer row/column operations, tracked in U and V.
    Pivots are chosen by minimal absolute value to limit entry growth.
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        arow, asrc = a[dst], a[src]
        for j in range(n):
            arow[j] += q * asrc[j]
        urow, usrc = u[dst], u[src]
        for j in range(m):
            urow[j] += q * usrc[j]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    size = min(m, n)
    while t < size:
        # locate minimal-absolute-value nonzero pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        # clear row t and column t; restart whenever a remainder becomes
        # the new smallest entry
        while True:
            restart = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q = x // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            break

        # pivot must divide every remaining entry for the divisibility chain
        d = a[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue

        if a[t][t] < 0:
            negate_row(t)
        t += 1

    factors = tuple(a[i][i] for i in range(size) if a[i][i])
    D = IntMatrix(m, n, {(i, i): a[i][i] for i in range(size) if a[i][i]})
    return SmithDecomposition(
        U=IntMatrix.from_rows(u) if m else IntMatrix(0, 0),
        D=D,
        V=IntMatrix.from_rows(v) if n else IntMatrix(0, 0),
        invariant_factors=factors,
    )


def rank(A):
    """Integer rank of A: the number of invariant factors."""
    return len(snf(A).invariant_factors)


def kernel_basis(A):
    """Lattice basis of the integer kernel of A.

    The columns of the right Smith transform beyond the rank span
    {x : A x = 0} over the integers, not merely over the rationals.
    Returns cols - rank(A) vectors of length A.cols.
    """
    dec = snf(A)
    r = len(dec.invariant_factors)
    vrows = dec.V.to_rows()
    basis = []
    for j in range(r, A.cols):
        basis.append(tuple(vrows[i][j] for i in range(A.cols)))
    return basis


def solve_integer(A, b):
    """One integer solution x of A x = b, or None when none exists.

    With U A V = D the system becomes D y = U b, solvable entrywise:
    each pivot must divide its target and the rankless tail of U b must
    vanish.  Any returned solution satisfies A x = b exactly.
    """
    if len(b) != A.rows:
        raise ValueError(f"right-hand side length {len(b)} does not match {A.rows} rows")
    dec = snf(A)
    c = dec.U.mul_vec(tuple(b))
    factors = dec.invariant_factors
    r = len(factors)
    y = [0] * A.cols
    for i in range(r):
        q, rem = divmod(c[i], factors[i])
        if rem:
            return None
        y[i] = q
    for i in range(r, A.rows):
        if c[i]:
            return None
    return dec.V.mul_vec(tuple(y))


def read_matrix_fixture(text):
    """Parse the plain-text matrix format: "rows cols" then "r c value" triples."""
    lines = text.splitlines()
    header = None
    entries = {}
    rows = cols = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise FixtureFormatError("expected header 'rows cols'", lineno)
            try:
                rows, cols = int(parts[0]), int(parts[1])
            except ValueError:
                raise FixtureFormatError("non-integer dimensions", lineno) from None
            header = (rows, cols)
            continue
        if len(parts) != 3:
            raise FixtureFormatError("expected 'row col value' triple", lineno)
        try:
            i, j, val = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise FixtureFormatError("non-integer triple", lineno) from None
        if not (0 <= i < rows and 0 <= j < cols):
            raise FixtureFormatError(f"index ({i}, {j}) out of bounds", lineno)
        entries[(i, j)] = val
    if header is None:
        raise FixtureFormatError("empty fixture: missing 'rows cols' header")
    return IntMatrix(rows, cols, entries)


def format_matrix_fixture(A):
    """Serialize a matrix to the fixture format, entries in row-major order."""
    out = [f"{A.rows} {A.cols}"]
    for (i, j) in sorted(A.entries):
        out.append(f"{i} {j} {A.entries[(i, j)]}")
    return "\n".join(out) + "\n"
