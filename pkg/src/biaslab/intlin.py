"""Exact integer linear algebra.

Dense arbitrary-precision integer matrices, Smith normal form with
unimodular transform witnesses, saturated kernel bases, cokernel
invariants and integer linear solving.  Everything downstream (group
ring expansions, homology, lattice and form computations) reduces to
this module, so it is deliberately boring: classical algorithms, exact
arithmetic, no floating point anywhere.

Conventions used throughout the package:

* vectors are rows and matrices act on the right (``x * A``);
* ``kernel_basis`` returns column vectors (the right kernel), and
  ``left_kernel_basis`` is provided for the row-vector convention;
* serialisation uses decimal strings so arbitrary precision survives
  JSON round trips.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class NoSolution(Exception):
    """Raised when an integer linear system has no solution."""


class IntMatrix:
    """A dense matrix of Python ints, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: list[list[int]]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("shape mismatch")
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        data = [list(map(int, r)) for r in rows]
        if not data:
            return IntMatrix(0, 0, [])
        return IntMatrix(len(data), len(data[0]), data)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, [[0] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @staticmethod
    def diagonal(entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        m = IntMatrix.zero(rows, cols)
        for i, e in enumerate(entries):
            m.data[i][i] = int(e)
        return m

    # -- basics -------------------------------------------------------

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [row[:] for row in self.data])

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.data!r})"

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def is_zero(self) -> bool:
        return all(e == 0 for row in self.data for e in row)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         [list(col) for col in zip(*self.data)] if self.rows else
                         [[] for _ in range(self.cols)] if self.cols else [])

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        ot = other.transpose().data
        out = [[sum(a * b for a, b in zip(row, col)) for col in ot]
               for row in self.data]
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         [[c * e for e in row] for row in self.data])

    def mod(self, m: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         [[e % m for e in row] for row in self.data])

    def row(self, i: int) -> list[int]:
        return self.data[i][:]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts disagree")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [a + b for a, b in zip(self.data, other.data)])

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts disagree")
        return IntMatrix(self.rows + other.rows, self.cols,
                         [r[:] for r in self.data] + [r[:] for r in other.data])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols),
                         [[self.data[i][j] for j in cols] for i in rows])

    # -- serialisation ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    def to_obj(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.data]

    @staticmethod
    def from_obj(obj: Iterable[Iterable[str]]) -> "IntMatrix":
        return IntMatrix.from_rows([[int(e) for e in row] for row in obj])

    @staticmethod
    def from_json(text: str) -> "IntMatrix":
        return IntMatrix.from_obj(json.loads(text))


def row_vector(entries: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([entries])


@dataclass(frozen=True)
class SNFResult:
    """U * A * V = S with U, V unimodular and S in Smith normal form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for i in range(min(self.S.rows, self.S.cols))
                   if self.S.data[i][i] != 0)

    def diagonal(self) -> list[int]:
        return [self.S.data[i][i] for i in range(min(self.S.rows, self.S.cols))]


def _smallest_pivot(s: list[list[int]], t: int, rows: int, cols: int):
    best = None
    for i in range(t, rows):
        row = s[i]
        for j in range(t, cols):
            e = row[j]
            if e != 0:
                a = abs(e)
                if best is None or a < best[0]:
                    best = (a, i, j)
                    if a == 1:
                        return best
    return best


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """Classical SNF with smallest-absolute-value pivot selection.

    Returns witnesses U (row operations) and V (column operations)
    with U*A*V = S, |det U| = |det V| = 1, and the diagonal of S a
    nonnegative divisibility chain.
    """
    rows, cols = A.rows, A.cols
    s = [row[:] for row in A.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, k, q):  # row i -= q * row k
        si, sk = s[i], s[k]
        for j in range(cols):
            si[j] -= q * sk[j]
        ui, uk = u[i], u[k]
        for j in range(rows):
            ui[j] -= q * uk[j]

    def col_op(j, k, q):  # col j -= q * col k
        for i in range(rows):
            s[i][j] -= q * s[i][k]
        for i in range(cols):
            v[i][j] -= q * v[i][k]

    def row_swap(i, k):
        s[i], s[k] = s[k], s[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j, k):
        for i in range(rows):
            s[i][j], s[i][k] = s[i][k], s[i][j]
        for i in range(cols):
            v[i][j], v[i][k] = v[i][k], v[i][j]

    t = 0
    while True:
        piv = _smallest_pivot(s, t, rows, cols)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        while True:
            # clear the pivot column
            dirty = False
            for i in range(t + 1, rows):
                e = s[i][t]
                if e != 0:
                    q = e // s[t][t]
                    row_op(i, t, q)
                    if s[i][t] != 0:
                        # remainder smaller than pivot: swap up and redo
                        row_swap(i, t)
                        dirty = True
            for j in range(t + 1, cols):
                e = s[t][j]
                if e != 0:
                    q = e // s[t][t]
                    col_op(j, t, q)
                    if s[t][j] != 0:
                        col_swap(j, t)
                        dirty = True
            if not dirty and all(s[i][t] == 0 for i in range(t + 1, rows)) \
                    and all(s[t][j] == 0 for j in range(t + 1, cols)):
                break
        t += 1
        if t >= min(rows, cols):
            break

    # make the diagonal nonnegative
    n = min(rows, cols)
    for i in range(n):
        if s[i][i] < 0:
            for j in range(cols):
                s[i][j] = -s[i][j]
            for j in range(rows):
                u[i][j] = -u[i][j]

    # enforce the divisibility chain d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            a, b = s[i][i], s[i + 1][i + 1]
            if a != 0 and b % a != 0:
                # fold row i+1 into the 2x2 block and re-reduce it
                col_op(i, i + 1, -1)  # col i += col i+1
                # now entries (i,i)=a, (i+1,i)=b; clear with row ops
                UU = IntMatrix.from_rows(u)
                VV = IntMatrix.from_rows(v)
                SS = IntMatrix.from_rows(s)
                inner = smith_normal_form(SS)
                return SNFResult(inner.U * UU, inner.S, VV * inner.V)
        break

    return SNFResult(IntMatrix.from_rows(u) if rows else IntMatrix(0, 0, []),
                     IntMatrix(rows, cols, s),
                     IntMatrix.from_rows(v) if cols else IntMatrix(0, 0, []))


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a saturated Z-basis of {v : A*v = 0}."""
    if A.cols == 0:
        return IntMatrix(0, 0, [])
    snf = smith_normal_form(A)
    r = snf.rank
    # A * (col j of V) = U^{-1} * (col j of S); zero for j >= r
    cols = list(range(r, A.cols))
    data = [[snf.V.data[i][j] for j in cols] for i in range(A.cols)]
    return IntMatrix(A.cols, len(cols), data)


def left_kernel_basis(A: IntMatrix) -> IntMatrix:
    """Rows form a saturated Z-basis of {x : x*A = 0}."""
    return kernel_basis(A.transpose()).transpose()


def cokernel_invariants(A: IntMatrix) -> tuple[tuple[int, ...], int]:
    """Invariant factors (>1) and free rank of Z^rows / col-span(A)."""
    snf = smith_normal_form(A)
    diag = [d for d in snf.diagonal() if d != 0]
    torsion = tuple(d for d in diag if d > 1)
    return torsion, A.rows - len(diag)


class LeftSolver:
    """Solves x*A = b repeatedly for a fixed A, caching the SNF."""

    def __init__(self, A: IntMatrix):
        self.A = A
        self.snf = smith_normal_form(A)
        self._Vt = self.snf.V.transpose()
        self._diag = self.snf.diagonal()

    def solve(self, b: Sequence[int]) -> list[int] | None:
        A = self.A
        if len(b) != A.cols:
            raise ValueError("length of b must equal cols(A)")
        # x*A = b  <=>  y*S = b*V with x = y*U
        c = [sum(bj * vj for bj, vj in zip(b, col)) for col in self._Vt.data]
        y = [0] * A.rows
        for j in range(A.cols):
            d = self._diag[j] if j < len(self._diag) else 0
            if d == 0:
                if c[j] != 0:
                    return None
            else:
                if c[j] % d != 0:
                    return None
                y[j] = c[j] // d
        U = self.snf.U
        return [sum(y[i] * U.data[i][j] for i in range(A.rows))
                for j in range(A.rows)]


def solve_left(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integral x with x*A = b, or None when b is outside the row
    lattice of A."""
    return LeftSolver(A).solve(b)


def quotient_invariants(basis: IntMatrix, sub_rows: IntMatrix) -> tuple[tuple[int, ...], int]:
    """Invariants of (row lattice of `basis`) / (row lattice of `sub_rows`).

    Both arguments are row-bases in a common ambient space; every row of
    `sub_rows` must lie in the row lattice of `basis`.
    """
    solver = LeftSolver(basis)
    coords = []
    for i in range(sub_rows.rows):
        x = solver.solve(sub_rows.data[i])
        if x is None:
            raise NoSolution(f"row {i} is not in the span of the basis")
        coords.append(x)
    if not coords:
        return (), basis.rows
    X = IntMatrix.from_rows(coords)
    return cokernel_invariants(X.transpose())


def det(A: IntMatrix) -> int:
    """Exact determinant via fraction-free Gaussian elimination."""
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    m = [row[:] for row in A.data]
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
    return sign * m[n - 1][n - 1] if n else 1
