"""Quadratic unitary groups over Z and Z/m in the split hyperbolic basis.

Matrices of size 2d are written in the basis (e_1..e_d, f_1..f_d) with
e_i paired against f_i.  The ring involution is trivial, so * is the
transpose, and the sign eps (+1 for even-dimensional surgery, -1 for
odd) is carried explicitly.  Membership is certified by words of
elementary factors; it is never decided negatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .intlin import IntMatrix, det

Modulus = int  # 0 means Z, otherwise Z/m


class NotInvertible(Exception):
    """A matrix payload is not invertible over the working ring."""


class NoSymmetrisation(Exception):
    """No theta with theta - eps*theta^T equals the given payload."""


def _reduce(M: IntMatrix, m: Modulus) -> IntMatrix:
    return M.mod(m) if m else M


def _entries_equal(A: IntMatrix, B: IntMatrix, m: Modulus) -> bool:
    return _reduce(A - B, m).is_zero()


def _adjugate(A: IntMatrix) -> IntMatrix:
    n = A.rows
    if n == 0:
        return IntMatrix.zero(0, 0)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            keep_r = [r for r in range(n) if r != j]
            keep_c = [c for c in range(n) if c != i]
            minor = A.submatrix(keep_r, keep_c)
            row.append((-1) ** (i + j) * det(minor))
        rows.append(row)
    return IntMatrix.from_rows(rows)


def matrix_inverse(A: IntMatrix, m: Modulus) -> IntMatrix:
    """Inverse over Z (det must be a unit) or over Z/m."""
    if A.rows != A.cols:
        raise NotInvertible("matrix is not square")
    d = det(A)
    adj = _adjugate(A)
    if m == 0:
        if d not in (1, -1):
            raise NotInvertible(f"determinant {d} is not a unit of Z")
        return adj.scale(d)
    d %= m
    try:
        dinv = pow(d, -1, m)
    except ValueError:
        raise NotInvertible(f"determinant {d} is not a unit mod {m}")
    return adj.scale(dinv).mod(m)


def split_form(X: IntMatrix, eps: int, m: Modulus) -> IntMatrix | None:
    """A theta with theta - eps*theta^T = X over the ring, or None."""
    n = X.rows
    if not _entries_equal(X.transpose(), X.scale(-eps), m):
        return None
    theta = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            theta[i][j] = X.data[i][j]
    for i in range(n):
        x = X.data[i][i]
        if eps == 1:
            # diagonal of theta cancels; x itself must vanish
            if (x % m if m else x) != 0:
                return None
        else:
            # need 2t = x in the ring
            if m == 0:
                if x % 2:
                    return None
                theta[i][i] = x // 2
            else:
                g = 2 if m % 2 == 0 else 1
                if x % m % g:
                    return None
                half = m // g
                theta[i][i] = (x % m // g) * pow(2 // g, -1, half) % half
    return IntMatrix.from_rows(theta) if n else IntMatrix.zero(0, 0)


@dataclass(frozen=True)
class UnitaryMembership:
    """Verdict of the two quadratic unitary conditions with witnesses."""

    matrix: IntMatrix
    eps: int
    modulus: Modulus
    condition_i: bool
    theta_upper: IntMatrix | None   # witness for alpha*beta^T
    theta_lower: IntMatrix | None   # witness for gamma*delta^T
    hermitian_weak: bool            # the relaxed condition (ii)'

    @property
    def is_member(self) -> bool:
        return (self.condition_i and self.theta_upper is not None
                and self.theta_lower is not None)


def is_unitary(sigma: IntMatrix, eps: int, m: Modulus = 0) -> UnitaryMembership:
    """Check the quadratic unitary conditions for a 2d x 2d matrix.

    Condition (i): alpha*delta^T + eps*beta*gamma^T = I.  Condition
    (ii): alpha*beta^T and gamma*delta^T each split as
    theta - eps*theta^T; the solved witnesses are returned.  The weaker
    hermitian variant (ii)' only asks X^T = -eps*X for both products.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if sigma.rows != sigma.cols or sigma.rows % 2:
        raise ValueError("even-size square matrix required")
    d = sigma.rows // 2
    top, bottom = range(d), range(d, 2 * d)
    alpha = sigma.submatrix(top, top)
    beta = sigma.submatrix(top, bottom)
    gamma = sigma.submatrix(bottom, top)
    delta = sigma.submatrix(bottom, bottom)
    lhs = alpha * delta.transpose() + (beta * gamma.transpose()).scale(eps)
    cond_i = _entries_equal(lhs, IntMatrix.identity(d), m)
    upper = alpha * beta.transpose()
    lower = gamma * delta.transpose()
    theta_u = split_form(upper, eps, m)
    theta_l = split_form(lower, eps, m)
    hermitian = (_entries_equal(upper.transpose(), upper.scale(-eps), m)
                 and _entries_equal(lower.transpose(), lower.scale(-eps), m))
    return UnitaryMembership(sigma, eps, m, cond_i, theta_u, theta_l,
                             hermitian)


@dataclass(frozen=True)
class Factor:
    """One elementary unitary factor with its certifying data."""

    kind: str                       # "q", "p-upper", "p-lower", "swap"
    matrix: IntMatrix
    payload: object                 # Q, P, or the swap index
    witness: IntMatrix | None = None

    def to_obj(self) -> dict:
        payload = (self.payload.to_obj()
                   if isinstance(self.payload, IntMatrix) else self.payload)
        return {"kind": self.kind,
                "payload": payload,
                "witness": self.witness.to_obj() if self.witness else None}


@dataclass
class UnitaryWord:
    """A product of certified elementary factors of fixed size and ring."""

    size: int
    modulus: Modulus
    eps: int
    factors: list[Factor] = field(default_factory=list)

    def append(self, factor: Factor) -> None:
        if factor.matrix.rows != self.size:
            raise ValueError("factor size mismatch")
        if not is_unitary(factor.matrix, self.eps, self.modulus).is_member:
            raise ValueError("factor fails the unitary conditions")
        self.factors.append(factor)

    def product(self) -> IntMatrix:
        out = IntMatrix.identity(self.size)
        for f in self.factors:
            out = out * f.matrix
        return _reduce(out, self.modulus)

    def reduce(self, m: int) -> "UnitaryWord":
        word = UnitaryWord(self.size, m, self.eps)
        for f in self.factors:
            word.append(Factor(f.kind, f.matrix.mod(m), f.payload,
                               f.witness.mod(m) if f.witness else None))
        return word

    def to_obj(self) -> dict:
        return {"size": self.size, "modulus": self.modulus, "eps": self.eps,
                "factors": [f.to_obj() for f in self.factors]}


def _block_diag(*blocks: IntMatrix) -> IntMatrix:
    n = sum(b.rows for b in blocks)
    out = IntMatrix.zero(n, n)
    at = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out.data[at + i][at + j] = b.data[i][j]
        at += b.rows
    return out


def elementary_q(Q: IntMatrix, eps: int, m: Modulus = 0) -> Factor:
    """The hyperbolic factor (Q, 0; 0, (Q^T)^{-1})."""
    inv_t = matrix_inverse(Q, m).transpose()
    return Factor("q", _reduce(_block_diag(Q, inv_t), m), Q)


def elementary_p_upper(A: IntMatrix, eps: int, m: Modulus = 0) -> Factor:
    """(I, P; 0, I) with P = A - eps*A^T and witness A."""
    d = A.rows
    P = _reduce(A - A.transpose().scale(eps), m)
    M = IntMatrix.identity(2 * d)
    for i in range(d):
        for j in range(d):
            M.data[i][d + j] = P.data[i][j]
    return Factor("p-upper", M, P, witness=A)


def elementary_p_lower(A: IntMatrix, eps: int, m: Modulus = 0) -> Factor:
    """(I, 0; P, I) with P = A - eps*A^T and witness A."""
    d = A.rows
    P = _reduce(A - A.transpose().scale(eps), m)
    M = IntMatrix.identity(2 * d)
    for i in range(d):
        for j in range(d):
            M.data[d + i][j] = P.data[i][j]
    return Factor("p-lower", M, P, witness=A)


def elementary_swap(index: int, d: int, eps: int, m: Modulus = 0) -> Factor:
    """The swap generator: e_i -> eps*f_i, f_i -> e_i, rest fixed."""
    if not 0 <= index < d:
        raise ValueError("swap index out of range")
    M = IntMatrix.identity(2 * d)
    M.data[index][index] = 0
    M.data[d + index][d + index] = 0
    M.data[index][d + index] = eps if m == 0 else eps % m
    M.data[d + index][index] = 1
    return Factor("swap", M, index)


@dataclass(frozen=True)
class Decomposition:
    """A verified matrix identity: target equals the product of factors."""

    target: IntMatrix
    factors: tuple[IntMatrix, ...]
    modulus: Modulus

    def __post_init__(self):
        prod = IntMatrix.identity(self.target.rows)
        for f in self.factors:
            prod = prod * f
        if not _entries_equal(prod, self.target, self.modulus):
            raise AssertionError("decomposition does not multiply out")


def commutator_decompose(A: IntMatrix, B: IntMatrix,
                         m: Modulus = 0) -> Decomposition:
    """A^{-1}B^{-1}AB + I = ((BA)^{-1} + BA)(A + A^{-1})(B + B^{-1}).

    All direct sums are diagonal 2r x 2r blocks; the identity is
    verified by multiplication.
    """
    r = A.rows
    Ainv = matrix_inverse(A, m)
    Binv = matrix_inverse(B, m)
    BA = _reduce(B * A, m)
    BAinv = matrix_inverse(BA, m)
    comm = _reduce(Ainv * Binv * A * B, m)
    target = _block_diag(comm, IntMatrix.identity(r))
    return Decomposition(_reduce(target, m),
                         (_reduce(_block_diag(BAinv, BA), m),
                          _reduce(_block_diag(A, Ainv), m),
                          _reduce(_block_diag(B, Binv), m)), m)


def whitehead_decompose(A: IntMatrix, m: Modulus = 0) -> Decomposition:
    """A + A^{-1} as four triangular factors, verified.

    (I,A;0,I) (I,0;I-A^{-1},I) (I,-I;0,I) (I,0;I-A,I).
    """
    r = A.rows
    Ainv = matrix_inverse(A, m)
    ident = IntMatrix.identity(r)

    def upper(P):
        M = IntMatrix.identity(2 * r)
        for i in range(r):
            for j in range(r):
                M.data[i][r + j] = P.data[i][j]
        return _reduce(M, m)

    def lower(P):
        M = IntMatrix.identity(2 * r)
        for i in range(r):
            for j in range(r):
                M.data[r + i][j] = P.data[i][j]
        return _reduce(M, m)

    target = _reduce(_block_diag(A, Ainv), m)
    return Decomposition(target,
                         (upper(A), lower(ident - Ainv),
                          upper(ident.scale(-1)), lower(ident - A)), m)


def three_step(Q: IntMatrix, m: Modulus = 0) -> Decomposition:
    """Q + Q^{-1} + I as two diagonal-block factors, verified.

    (Q + I + (Q^T)^{-1}) times the inverse of (I + Q + (Q^T)^{-1}).
    """
    r = Q.rows
    Qinv = matrix_inverse(Q, m)
    Qstar_inv = Qinv.transpose()
    ident = IntMatrix.identity(r)
    first = _reduce(_block_diag(Q, ident, Qstar_inv), m)
    # the inverse of (I + Q + (Q^T)^{-1})
    second = _reduce(_block_diag(ident, Qinv, Q.transpose()), m)
    target = _reduce(_block_diag(Q, Qinv, ident), m)
    return Decomposition(target, (first, second), m)


def lift_triangular(P: IntMatrix, eps: int, m: int) -> Factor:
    """Lift an (anti)symmetric triangular payload mod m to Z.

    P must satisfy P^T = -eps*P mod m; a mod-m witness F with
    F - eps*F^T = P is solved, lifted entrywise to the minimal
    representatives in (-m/2, m/2], and the integer upper P-type
    factor is returned.  Its reduction mod m is (I, P; 0, I).
    """
    F = split_form(P.mod(m), eps, m)
    if F is None:
        for i in range(P.rows):
            x = P.data[i][i] % m
            bad = (x != 0) if eps == 1 else (m % 2 == 0 and x % 2 != 0)
            if bad:
                raise NoSymmetrisation(f"diagonal entry ({i},{i}) = {x} "
                                       f"obstructs the splitting mod {m}")
        raise NoSymmetrisation("payload is not (-eps)-symmetric mod "
                               f"{m}")
    lifted = IntMatrix.from_rows([[_min_lift(e, m) for e in row]
                                  for row in F.data])
    factor = elementary_p_upper(lifted, eps, 0)
    if not _entries_equal(factor.payload, P, m):
        raise AssertionError("lift does not reduce to the payload")
    return factor


def _min_lift(x: int, m: int) -> int:
    """Representative of x mod m in (-m/2, m/2]."""
    x %= m
    return x if 2 * x <= m else x - m


@dataclass(frozen=True)
class LiftSquareResult:
    """An integer word reducing to diag(a^2, a^{-2}, 1, ..., 1) mod m."""

    a: int
    m: int
    d: int
    eps: int
    word: UnitaryWord
    target_split: IntMatrix         # split-basis diagonal mod m
    target_interleaved: list[int]   # (e_1, f_1, e_2, f_2, ...) display
    membership: UnitaryMembership   # of the integer product


def lift_square(a: int, m: int, d: int, eps: int) -> LiftSquareResult:
    """A word of integer elementary factors hitting diag(a^2, a^{-2}).

    The Whitehead identity writes diag(a, a^{-1}) mod m as four
    triangular factors; lifting each factor gives an integral matrix
    with determinant one reducing to it.  Hyperbolically embedded and
    conjugated by the swap at index 2, the commutator collapses mod m
    to diag(a^2, 1, ..., 1 | a^{-2}, 1, ..., 1) in the split basis.
    """
    if d < 3:
        raise ValueError("d >= 3 required")
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    a %= m
    a_inv = pow(a, -1, m)
    one = IntMatrix.identity(1)
    wh = whitehead_decompose(IntMatrix.from_rows([[a]]), m)
    lifted = IntMatrix.identity(2)
    for f in wh.factors:
        lifted = lifted * IntMatrix.from_rows(
            [[_min_lift(e, m) for e in row] for row in f.data])
    # lifted is in SL_2(Z) and reduces to diag(a, a^{-1}) mod m
    Q = _block_diag(lifted, IntMatrix.identity(d - 2))
    word = UnitaryWord(2 * d, 0, eps)
    dq = elementary_q(Q, eps, 0)
    sw = elementary_swap(1, d, eps, 0)
    for f in (dq, sw, dq, sw, sw, sw):   # sw^3 = sw^{-1}
        word.append(f)
    product = word.product()
    target = IntMatrix.identity(2 * d)
    target.data[0][0] = pow(a, 2, m)
    target.data[d][d] = pow(a_inv, 2, m)
    if not _entries_equal(product, target, m):
        raise AssertionError("lifted word does not reduce to the target")
    interleaved = []
    for i in range(d):
        interleaved += [target.data[i][i], target.data[d + i][d + i]]
    return LiftSquareResult(a, m, d, eps, word, target.mod(m), interleaved,
                            is_unitary(product, eps, 0))
