"""Exact integer linear algebra: matrices, Smith normal form, Diophantine systems.

Everything here works over plain Python ints, which are arbitrary precision;
no floating point is used anywhere.  Infeasible linear systems come with an
independently checkable modular certificate rather than a bare "no".
"""

from __future__ import annotations

from dataclasses import dataclass, field


class DimensionError(ValueError):
    """Raised when matrix/vector shapes are incompatible."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, stored as a tuple of row tuples."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if not rows:
            raise DimensionError("matrix must be nonempty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionError("ragged rows")
        if width == 0:
            raise DimensionError("matrix must have at least one column")
        return IntMatrix(tuple(rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix.from_rows([[0] * cols for _ in range(rows)])

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.transpose().entries
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries]
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return IntMatrix.from_rows(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return IntMatrix.from_rows(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix.from_rows([[c * x for x in row] for row in self.entries])

    def apply(self, vec) -> tuple[int, ...]:
        vec = tuple(int(x) for x in vec)
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def det(self) -> int:
        """Exact determinant via Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of non-square matrix")
        n = self.rows
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ M @ V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        k = min(self.D.rows, self.D.cols)
        return [self.D.entries[i][i] for i in range(k)]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) > 0 and x*a + y*b == g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _nearest_quotient(a: int, b: int) -> int:
    """q minimizing |a - q*b| for b != 0 (ties toward the floor quotient)."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def _row_echelon_reduce(d: list[list[int]], u: list[list[int]]) -> None:
    """Row Hermite pass: echelonize, then reduce the entries above each pivot.

    Each column is cleared Euclid-style: repeatedly swap the smallest-magnitude
    entry into the pivot slot and subtract nearest-integer multiples of that
    row from the rest.  Unlike one-shot extended-gcd row combinations, the
    pivot row is never replaced by a large combination, which is what keeps
    intermediate entries from exploding on dense inputs."""
    rows = len(d)
    cols = len(d[0]) if rows else 0
    p = 0
    for j in range(cols):
        if p >= rows:
            break
        while True:
            # Smallest-magnitude nonzero entry as pivot, first row on ties.
            piv, piv_val = None, None
            for i in range(p, rows):
                a = abs(d[i][j])
                if a and (piv_val is None or a < piv_val):
                    piv, piv_val = i, a
            if piv is None:
                break
            if piv != p:
                d[p], d[piv] = d[piv], d[p]
                u[p], u[piv] = u[piv], u[p]
            clean = True
            pivot_row, pivot = d[p], d[p][j]
            for i in range(p + 1, rows):
                if d[i][j] == 0:
                    continue
                q = _nearest_quotient(d[i][j], pivot)
                d[i] = [a - q * b for a, b in zip(d[i], pivot_row)]
                u[i] = [a - q * b for a, b in zip(u[i], u[p])]
                if d[i][j] != 0:
                    clean = False
            if clean:
                break
        if piv is None:
            continue
        if d[p][j] < 0:
            d[p] = [-x for x in d[p]]
            u[p] = [-x for x in u[p]]
        pivot = d[p][j]
        for i in range(p):
            q = d[i][j] // pivot
            if q:
                d[i] = [a - q * b for a, b in zip(d[i], d[p])]
                u[i] = [a - q * b for a, b in zip(u[i], u[p])]
        p += 1


def _transpose(m: list[list[int]]) -> list[list[int]]:
    return [list(row) for row in zip(*m)] if m and m[0] else []


def _is_diagonal(d: list[list[int]]) -> bool:
    return all(
        x == 0 for i, row in enumerate(d) for j, x in enumerate(row) if i != j
    )


def smith_normal_form(M: IntMatrix) -> SnfDecomposition:
    """Smith normal form with transformation matrices.

    Returns (U, D, V) with U @ M @ V == D, det U, det V in {1, -1}, D diagonal
    with nonnegative entries satisfying d1 | d2 | ... .
    """
    rows, cols = M.shape
    d = M.to_lists()
    u = IntMatrix.identity(rows).to_lists()
    v = IntMatrix.identity(cols).to_lists()

    # Alternate row and column Hermite passes.  Each pass divides the previous
    # pivot product, so the alternation reaches a diagonal matrix.  v holds the
    # TRANSPOSE of the right transform throughout (so column ops act on rows).
    while not _is_diagonal(d):
        _row_echelon_reduce(d, u)
        if _is_diagonal(d):
            break
        dt = _transpose(d)
        _row_echelon_reduce(dt, v)
        d = _transpose(dt)

    limit = min(rows, cols)

    def swap_diag(i: int, j: int) -> None:
        d[i][i], d[j][j] = d[j][j], d[i][i]
        u[i], u[j] = u[j], u[i]
        v[i], v[j] = v[j], v[i]

    # Push zero diagonal entries past nonzero ones.
    nonzero = [i for i in range(limit) if d[i][i] != 0]
    for pos, i in enumerate(nonzero):
        if pos != i:
            swap_diag(pos, i)

    # Enforce the divisibility chain with 2x2 gcd steps; all four operations
    # touch only rows/columns i and j, whose other entries are zero.
    rank = len(nonzero)
    for i in range(rank):
        for j in range(i + 1, rank):
            a, b = d[i][i], d[j][j]
            if b % a == 0:
                continue
            g, x, y = _egcd(a, b)
            l = a // g * b
            # col_i += col_j; gcd rows (i,j); clear fill-in: the composite
            # effect on the 2x2 block diag(a,b) is diag(g, lcm).
            v[i] = [p + q for p, q in zip(v[i], v[j])]
            a_, b_ = a // g, b // g
            u[i], u[j] = (
                [x * p + y * q for p, q in zip(u[i], u[j])],
                [a_ * q - b_ * p for p, q in zip(u[i], u[j])],
            )
            # row i is now (g, y*b) in cols (i,j); clear with a column op.
            v[j] = [p - y * b_ * q for p, q in zip(v[j], v[i])]
            d[i][i], d[j][j] = g, l

    for i in range(rank):
        if d[i][i] < 0:
            d[i][i] = -d[i][i]
            u[i] = [-x for x in u[i]]

    D = IntMatrix.from_rows(d)
    U = IntMatrix.from_rows(u)
    V = IntMatrix.from_rows(_transpose(v))
    return SnfDecomposition(U=U, D=D, V=V)


@dataclass(frozen=True)
class Solution:
    """A particular solution of A x = b together with a kernel basis."""

    particular: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class NoSolution:
    """Infeasibility certificate: y @ A == 0 (mod q) while y @ b != 0 (mod q)."""

    certificate: tuple[int, ...]
    modulus: int


DiophantineAnswer = Solution | NoSolution


def _smallest_prime_not_dividing(m: int) -> int:
    m = abs(m)
    p = 2
    while True:
        if m % p != 0:
            return p
        p += 1
        while any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            p += 1


def solve_diophantine(A: IntMatrix, b) -> DiophantineAnswer:
    """Solve A x = b over the integers.

    Either a particular solution with a basis of the integer kernel, or a
    NoSolution certificate (y, q) with y @ A == 0 mod q but y @ b != 0 mod q.
    """
    b = tuple(int(x) for x in b)
    if len(b) != A.rows:
        raise DimensionError("right-hand side length does not match row count")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    diag = snf.diagonal()
    rank = sum(1 for x in diag if x != 0)

    y = [0] * A.cols
    for i in range(A.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                # Row i of U kills A exactly; any prime missing from c[i] works.
                q = _smallest_prime_not_dividing(c[i])
                return NoSolution(certificate=snf.U.row(i), modulus=q)
        else:
            if c[i] % di != 0:
                return NoSolution(certificate=snf.U.row(i), modulus=di)
            y[i] = c[i] // di

    particular = snf.V.apply(y)
    kernel = tuple(snf.V.col(j) for j in range(rank, A.cols))
    return Solution(particular=particular, kernel_basis=kernel)


def verify_snf(M: IntMatrix, snf: SnfDecomposition) -> bool:
    """Independent check of all SnfDecomposition invariants."""
    if (snf.U @ M @ snf.V).entries != snf.D.entries:
        return False
    if abs(snf.U.det()) != 1 or abs(snf.V.det()) != 1:
        return False
    for i in range(snf.D.rows):
        for j in range(snf.D.cols):
            if i != j and snf.D.entries[i][j] != 0:
                return False
    diag = snf.diagonal()
    if any(x < 0 for x in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a != 0:
            return False
    return True


def verify_solution(A: IntMatrix, b, sol: Solution) -> bool:
    b = tuple(int(x) for x in b)
    if A.apply(sol.particular) != b:
        return False
    zero = (0,) * A.rows
    return all(A.apply(v) == zero for v in sol.kernel_basis)


def verify_no_solution(A: IntMatrix, b, cert: NoSolution) -> bool:
    b = tuple(int(x) for x in b)
    y, q = cert.certificate, cert.modulus
    if q <= 1 or len(y) != A.rows:
        return False
    ya = tuple(sum(y[i] * A.entries[i][j] for i in range(A.rows)) for j in range(A.cols))
    yb = sum(yi * bi for yi, bi in zip(y, b))
    return all(x % q == 0 for x in ya) and yb % q != 0
