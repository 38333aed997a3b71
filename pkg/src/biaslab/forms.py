"""Epsilon-symmetric forms and fixed-point/Tate functors on G-lattices.

Forms are integer (or Z/k) Gram matrices with Gram^T = eps * Gram.  A
G-lattice is Z^rank with one action matrix per group generator (row
vectors act on the right, so the matrix of a product is the product of
matrices).  The fixed sublattice, the norm image, the Tate quotient
and the evaluation pairing with the dual lattice are all computed by
exact integer linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .groupring import FiniteGroupModel
from .intlin import (IntMatrix, LeftSolver, left_kernel_basis,
                     smith_normal_form)
from .units import TooLarge

FIXED_TATE_GUARD = 10 ** 5


class FormError(Exception):
    """A Gram matrix violates the promised symmetry or fixed-part rule."""


@dataclass(frozen=True)
class EpsForm:
    """An eps-symmetric bilinear form over Z (k = 0) or Z/k."""

    k: int
    eps: int
    gram: IntMatrix

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise FormError("eps must be +1 or -1")
        if self.gram.rows != self.gram.cols:
            raise FormError("Gram matrix must be square")
        diff = self.gram.transpose() - self.gram.scale(self.eps)
        if self.k:
            diff = diff.mod(self.k)
        if not diff.is_zero():
            raise FormError("Gram matrix is not eps-symmetric")

    @property
    def rank(self) -> int:
        return self.gram.rows

    def to_obj(self) -> dict:
        return {"k": self.k, "eps": self.eps, "gram": self.gram.to_obj()}


def _hyperbolic_gram(diag: list[int], eps: int) -> IntMatrix:
    d = len(diag)
    rows = [[0] * (2 * d) for _ in range(2 * d)]
    for i, b in enumerate(diag):
        rows[i][d + i] = b
        rows[d + i][i] = eps * b
    return IntMatrix.from_rows(rows) if rows else IntMatrix.zero(0, 0)


def hyperbolic(d: int, eps: int, k: int = 0) -> EpsForm:
    """The rank-2d block form (0, I; eps*I, 0)."""
    return EpsForm(k, eps, _hyperbolic_gram([1] * d, eps))


def metabolic(h: EpsForm) -> EpsForm:
    """The rank-doubled form (0, I; eps*I, H)."""
    d = h.rank
    gram = _hyperbolic_gram([1] * d, h.eps)
    for i in range(d):
        for j in range(d):
            gram.data[d + i][d + j] = h.gram.data[i][j]
    return EpsForm(h.k, h.eps, gram)


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    if A.rows != A.cols:
        raise ValueError("square matrix required")
    solver = LeftSolver(A)
    rows = []
    for i in range(A.rows):
        e = [1 if j == i else 0 for j in range(A.cols)]
        x = solver.solve(e)
        if x is None:
            raise ValueError("matrix is not invertible over Z")
        rows.append(x)
    return IntMatrix.from_rows(rows)


class GLattice:
    """Z^rank with a right action of a finite group model."""

    def __init__(self, group: FiniteGroupModel, actions: list[IntMatrix]):
        self.group = group
        self.actions = list(actions)
        gens = group.generators()
        if len(self.actions) != len(gens):
            raise ValueError("one action matrix per model generator")
        self.rank = self.actions[0].rows if self.actions else 0
        for A in self.actions:
            if A.rows != self.rank or A.cols != self.rank:
                raise ValueError("action matrices must be square, same size")
        self._element_cache: dict = {}
        self._validate()

    def _validate(self):
        ident = IntMatrix.identity(self.rank)
        gens = self.group.generators()
        for g, A in zip(gens, self.actions):
            # order of the generator in the group
            order = 1
            h = g
            while h != self.group.identity():
                h = self.group.mul(h, g)
                order += 1
            power = ident
            for _ in range(order):
                power = power * A
            if power != ident:
                raise ValueError("action violates a generator order")
        # products must respect the multiplication table on generators
        for g, A in zip(gens, self.actions):
            for h, B in zip(gens, self.actions):
                if self.element_action(self.group.mul(g, h)) != A * B:
                    raise ValueError("action violates the group law")

    def element_action(self, g: tuple) -> IntMatrix:
        if g in self._element_cache:
            return self._element_cache[g]
        gens = self.group.generators()
        # decompose g as x^a y^e (if Q8 present) times abelian powers
        mats = []
        if self.group.q8:
            q, exps = g[0], g[1:]
            a, e = q % 4, q // 4
            mats += [self.actions[0]] * a + [self.actions[1]] * e
            offset = 2
        else:
            exps = g
            offset = 0
        for i, k in enumerate(exps):
            mats += [self.actions[offset + i]] * k
        out = IntMatrix.identity(self.rank)
        for M in mats:
            out = out * M
        self._element_cache[g] = out
        return out

    @cached_property
    def norm_matrix(self) -> IntMatrix:
        if self.group.order * self.rank > FIXED_TATE_GUARD:
            raise TooLarge("norm computation exceeds the guard")
        total = IntMatrix.zero(self.rank, self.rank)
        for g in self.group.elements():
            total = total + self.element_action(g)
        return total

    def dual(self) -> "GLattice":
        """The dual lattice, acted on by (A_g^{-1})^T."""
        if not hasattr(self, "_dual"):
            self._dual = GLattice(self.group,
                                  [inverse_unimodular(A).transpose()
                                   for A in self.actions])
        return self._dual


def trivial_lattice(group: FiniteGroupModel, rank: int) -> GLattice:
    return GLattice(group, [IntMatrix.identity(rank)
                            for _ in group.generators()])


def regular_lattice(group: FiniteGroupModel) -> GLattice:
    """ZG as a lattice: right multiplication in the element basis."""
    elems = group.elements()
    index = {g: k for k, g in enumerate(elems)}
    n = len(elems)
    actions = []
    for s in group.generators():
        rows = [[0] * n for _ in range(n)]
        for k, g in enumerate(elems):
            rows[k][index[group.mul(g, s)]] = 1
        actions.append(IntMatrix.from_rows(rows))
    return GLattice(group, actions)


@dataclass(frozen=True)
class FixedTate:
    """Fixed sublattice, norm image and Tate quotient of a G-lattice."""

    lattice: GLattice
    fixed_basis: IntMatrix       # rows: saturated basis of L^G
    adapted_basis: IntMatrix     # rows: basis in which N*L is diagonal
    invariants: tuple[int, ...]  # n_1 | ... | n_f (1s kept)

    @property
    def tate_factors(self) -> tuple[int, ...]:
        return tuple(n for n in self.invariants if n > 1)


_fixed_tate_cache: dict[int, FixedTate] = {}


def fixed_and_tate(L: GLattice) -> FixedTate:
    """L^G, N*L and the Tate quotient L^G/(N*L) in an adapted basis."""
    if id(L) in _fixed_tate_cache:
        return _fixed_tate_cache[id(L)]
    if L.group.order * L.rank > FIXED_TATE_GUARD:
        raise TooLarge("lattice exceeds the fixed-point guard")
    if not L.actions:
        ident = IntMatrix.identity(L.rank)
        return FixedTate(L, ident, ident, (1,) * L.rank)
    stacked = L.actions[0] - IntMatrix.identity(L.rank)
    for A in L.actions[1:]:
        stacked = stacked.hstack(A - IntMatrix.identity(L.rank))
    B = left_kernel_basis(stacked)
    f = B.rows
    if f == 0:
        empty = IntMatrix.zero(0, L.rank)
        return FixedTate(L, empty, empty, ())
    N = L.norm_matrix
    solver = LeftSolver(B)
    y_rows = []
    for i in range(N.rows):
        x = solver.solve(N.row(i))
        if x is None:
            raise AssertionError("norm image not inside the fixed lattice")
        y_rows.append(x)
    Y = IntMatrix.from_rows(y_rows) if y_rows else IntMatrix.zero(0, f)
    snf = smith_normal_form(Y)
    diag = snf.diagonal()
    if len([e for e in diag if e]) < f:
        raise AssertionError("Tate quotient of a lattice must be finite")
    invariants = tuple(diag[:f])
    adapted = inverse_unimodular(snf.V) * B
    out = FixedTate(L, B, adapted, invariants)
    _fixed_tate_cache[id(L)] = out
    return out


@dataclass(frozen=True)
class EvaluationForms:
    """Evaluation pairing data of a G-lattice and its dual."""

    fixed: FixedTate             # of L
    dual_fixed: FixedTate        # of L*
    pairing: IntMatrix           # adapted dual basis x adapted basis
    betas: tuple[int, ...]       # diagonalised pairing invariants
    e_fixed: EpsForm             # e^G over Z
    e_tate: EpsForm              # e-hat over Z/|G|


def evaluation_forms(L: GLattice, eps: int) -> EvaluationForms:
    """The fixed evaluation form e^G and the Tate form e-hat.

    The pairing matrix between (L*)^G and L^G is diagonalised by SNF;
    its invariant factors beta_i must equal |G|/n_i as multisets,
    which is verified.
    """
    ft = fixed_and_tate(L)
    ftd = fixed_and_tate(L.dual())
    M = ftd.adapted_basis * ft.adapted_basis.transpose()
    snf = smith_normal_form(M)
    betas = tuple(snf.diagonal())
    order = L.group.order
    expected = sorted(order // n for n in ft.invariants)
    if sorted(betas) != expected:
        raise FormError(f"pairing invariants {sorted(betas)} != |G|/n_i "
                        f"{expected}")
    e_fixed = EpsForm(0, eps, _hyperbolic_gram(list(betas), eps))
    tate_betas = [b for b in betas if b % order != 0]
    e_tate = EpsForm(order, eps, _hyperbolic_gram(tate_betas, eps))
    return EvaluationForms(ft, ftd, M, betas, e_fixed, e_tate)


def met_fixed_form(L: GLattice, phi: IntMatrix, eps: int) -> EpsForm:
    """Fixed form of Met(L* + L, phi) for phi vanishing on L^G.

    phi is an eps-symmetric Gram matrix on L; it must restrict to zero
    on the fixed sublattice (otherwise FormMismatch semantics apply),
    and then the fixed form equals e^G.
    """
    EpsForm(0, eps, phi)  # validates symmetry
    ev = evaluation_forms(L, eps)
    B = ev.fixed.adapted_basis
    restricted = B * phi * B.transpose()
    if not restricted.is_zero():
        raise FormError("phi does not vanish on the fixed sublattice")
    return ev.e_fixed


def isometry_kind(M: IntMatrix, F: EpsForm) -> str:
    """Classify M against F: not-isometry, diagonal, triangular, general.

    F must be in a hyperbolic-adapted block basis of even rank.  A
    diagonal isometry is (Q, 0; 0, (Q^T)^{-1})-shaped; a triangular one
    is (I, P; 0, I) with P^T = -eps*P.
    """
    if F.rank % 2 != 0 or M.rows != F.rank or M.cols != F.rank:
        raise ValueError("even-rank form and matching matrix required")
    product = M.transpose() * F.gram * M
    diff = product - F.gram
    if F.k:
        diff = diff.mod(F.k)
    if not diff.is_zero():
        return "not-isometry"
    d = F.rank // 2
    top, bottom = range(d), range(d, 2 * d)
    alpha = M.submatrix(top, top)
    beta = M.submatrix(top, bottom)
    gamma = M.submatrix(bottom, top)
    delta = M.submatrix(bottom, bottom)

    def vanishes(X: IntMatrix) -> bool:
        return (X.mod(F.k) if F.k else X).is_zero()

    ident = IntMatrix.identity(d)
    if vanishes(beta) and vanishes(gamma):
        return "diagonal"
    if (vanishes(alpha - ident) and vanishes(delta - ident)
            and vanishes(gamma)):
        skew = beta.transpose() + beta.scale(F.eps)
        if vanishes(skew):
            return "triangular"
    return "general"
