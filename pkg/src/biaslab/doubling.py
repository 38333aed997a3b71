"""Algebraic 2n-doubles, doubled chain maps, and Tate-level isometries.

The double of an algebraic n-complex C splices C to its involuted dual
with middle module C_n* + C_n.  Doubled chain maps combine a map
f: C -> C' with a map g: C' -> C going the other way; on Tate groups of
the top-degree kernel lattices they act block-diagonally, and the
induced map nu together with the evaluation-pairing congruence is the
verified content.  The quadratic bias class is the determinant class
pushed into the quotient by squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .forms import FixedTate, GLattice, fixed_and_tate
from .foxbias import (AlgebraicComplex, ChainMap, induced_kernel_map,
                      lift_chain_map, verify_chain_map)
from .groupring import GroupRingElement, ZGMatrix, z_expand
from .intlin import (IntMatrix, LeftSolver, det, left_kernel_basis,
                     quotient_invariants)
from .units import (NotAUnit, UnitClass, UnitSubgroup, class_of, kth_powers,
                    minus_one, product)

FULL_HOMOLOGY_GUARD = 64


class FormMismatch(Exception):
    """The supplied middle form is not eps-symmetric or has fixed part."""


class NotDiagonal(Exception):
    """A doubled map fails the Tate-level diagonal isometry check."""


@dataclass(frozen=True)
class PiLattice:
    """The top-degree integral kernel of a complex as a G-lattice."""

    complex: AlgebraicComplex
    basis: IntMatrix            # rows: Z-basis inside the flattened C_top
    lattice: GLattice           # the induced G-action in that basis


_pi_cache: dict[int, PiLattice] = {}


def pi_top_lattice(C: AlgebraicComplex) -> PiLattice:
    """ker of the top boundary on the integral group-ring lattice.

    Scalar multiplication by a group element permutes the flattened
    coordinates, so the kernel inherits a G-action, solved in the
    saturated kernel basis.
    """
    if id(C) in _pi_cache:
        return _pi_cache[id(C)]
    G = C.group
    elems = G.elements()
    index = {g: k for k, g in enumerate(elems)}
    n = len(elems)
    d_top = C.boundaries[-1]
    K = left_kernel_basis(z_expand(d_top))
    ktop = d_top.rows
    solver = LeftSolver(K)
    actions = []
    for s in G.generators():
        perm = [0] * (n * ktop)
        for j in range(ktop):
            for h in elems:
                perm[j * n + index[h]] = j * n + index[G.mul(s, h)]
        rows = []
        for i in range(K.rows):
            moved = [0] * (n * ktop)
            for c, e in enumerate(K.data[i]):
                moved[perm[c]] = e
            x = solver.solve(moved)
            if x is None:
                raise AssertionError("kernel is not G-invariant")
            rows.append(x)
        actions.append(IntMatrix.from_rows(rows))
    out = PiLattice(C, K, GLattice(G, actions))
    _pi_cache[id(C)] = out
    return out


@dataclass(frozen=True)
class DoubleComplex:
    """The 2n-double of an algebraic n-complex with its middle form."""

    base: AlgebraicComplex
    complex: AlgebraicComplex   # length 2n
    phi: IntMatrix              # eps-symmetric form on the kernel lattice
    eps: int


def _zg_vstack(group, top: ZGMatrix, bottom: ZGMatrix) -> ZGMatrix:
    rows = [[top.data[i][j] for j in range(top.cols)]
            for i in range(top.rows)]
    rows += [[bottom.data[i][j] for j in range(bottom.cols)]
             for i in range(bottom.rows)]
    return ZGMatrix.from_rows(group, rows)


def _zg_hstack(group, left: ZGMatrix, right: ZGMatrix) -> ZGMatrix:
    rows = [[left.data[i][j] for j in range(left.cols)]
            + [right.data[i][j] for j in range(right.cols)]
            for i in range(left.rows)]
    return ZGMatrix.from_rows(group, rows)


def _zg_zero(group, rows: int, cols: int) -> ZGMatrix:
    zero = GroupRingElement.zero(group)
    return ZGMatrix.from_rows(group, [[zero] * cols for _ in range(rows)])


def _zg_block_diag(group, a: ZGMatrix, b: ZGMatrix) -> ZGMatrix:
    top = _zg_hstack(group, a, _zg_zero(group, a.rows, b.cols))
    bottom = _zg_hstack(group, _zg_zero(group, b.rows, a.cols), b)
    return _zg_vstack(group, top, bottom)


def double(C: AlgebraicComplex, phi: IntMatrix | None = None) -> DoubleComplex:
    """The algebraic 2n-double of C with middle form phi.

    phi is a Gram matrix on the top kernel lattice (the default is
    zero); it must be eps-symmetric and restrict to zero on the fixed
    sublattice.  The spliced boundaries take the all-plus signs, under
    which both composites vanish identically (asserted).
    """
    group = C.group
    n = C.n
    eps = C.epsilon
    pl = pi_top_lattice(C)
    if phi is None:
        phi = IntMatrix.zero(pl.basis.rows, pl.basis.rows)
    if phi.rows != pl.basis.rows or phi.cols != pl.basis.rows:
        raise FormMismatch("form size does not match the kernel lattice")
    if not (phi.transpose() - phi.scale(eps)).is_zero():
        raise FormMismatch("middle form is not eps-symmetric")
    ft = fixed_and_tate(pl.lattice)
    if not (ft.fixed_basis * phi * ft.fixed_basis.transpose()).is_zero():
        raise FormMismatch("middle form has nonzero fixed part")
    d_top = C.boundaries[-1]
    dual_top = d_top.transpose_involute()
    boundaries = list(C.boundaries[:-1])
    # degree n: (0; d_n) stacked on C_n* + C_n
    boundaries.append(_zg_vstack(group, _zg_zero(group, d_top.rows,
                                                 d_top.cols), d_top))
    # degree n+1: (d_n*, 0) into C_n* + C_n
    boundaries.append(_zg_hstack(group, dual_top,
                                 _zg_zero(group, dual_top.rows, d_top.rows)))
    for i in range(n - 1, 0, -1):
        boundaries.append(C.boundaries[i - 1].transpose_involute())
    D = AlgebraicComplex(group, tuple(boundaries))
    for i in range(1, len(boundaries)):
        if not (boundaries[i] * boundaries[i - 1]).is_zero():
            raise AssertionError(f"boundary composite {i + 1} -> {i - 1} "
                                 "is nonzero")
    return DoubleComplex(C, D, phi, eps)


def homology_pattern(C: AlgebraicComplex) -> list[tuple[tuple[int, ...], int]]:
    """(torsion, free rank) of H_i of the flattened complex, i = 0..n."""
    if C.group.order > FULL_HOMOLOGY_GUARD:
        raise FormMismatch("group too large for full homology; "
                           f"guard is {FULL_HOMOLOGY_GUARD}")
    mats = [z_expand(b) for b in C.boundaries]
    out = []
    for i in range(C.n + 1):
        size = C.rank(i) * C.group.order
        cycles = (IntMatrix.identity(size) if i == 0
                  else left_kernel_basis(mats[i - 1]))
        if i == C.n:
            out.append(((), cycles.rows))
        else:
            out.append(quotient_invariants(cycles, mats[i]))
    return out


@dataclass(frozen=True)
class DoubleChainMap:
    """A doubled chain map M(f, g) with its verification."""

    source: DoubleComplex
    target: DoubleComplex
    f: ChainMap                 # C -> C'
    g: ChainMap                 # C' -> C
    chain: ChainMap             # the verified spliced map D -> D'


def double_map(f: ChainMap, g: ChainMap,
               source: DoubleComplex | None = None,
               target: DoubleComplex | None = None) -> DoubleChainMap:
    """Splice f: C -> C' and g: C' -> C into a map of the doubles."""
    if f.source is not g.target or f.target is not g.source:
        raise ValueError("f and g must connect the same two complexes")
    source = source if source is not None else double(f.source)
    target = target if target is not None else double(f.target)
    group = f.source.group
    n = f.source.n
    mats = list(f.mats[:n])
    mats.append(_zg_block_diag(group, g.mats[n].transpose_involute(),
                               f.mats[n]))
    for i in range(n - 1, -1, -1):
        mats.append(g.mats[i].transpose_involute())
    chain = verify_chain_map(mats, source.complex, target.complex)
    return DoubleChainMap(source, target, f, g, chain)


def _induced_on_rows(rows: IntMatrix, action: IntMatrix,
                     target_rows: IntMatrix) -> IntMatrix:
    """Express (rows * action) in the row basis target_rows."""
    solver = LeftSolver(target_rows)
    out = []
    for i in range(rows.rows):
        moved = (IntMatrix.from_rows([rows.data[i]]) * action).row(0)
        x = solver.solve(moved)
        if x is None:
            raise NotDiagonal("induced map leaves the fixed lattice")
        out.append(x)
    return IntMatrix.from_rows(out) if out else IntMatrix.zero(0, target_rows.rows)


def _kernel_matrix(pl_src: PiLattice, pl_tgt: PiLattice,
                   top: ZGMatrix) -> IntMatrix:
    """The top-degree map restricted to kernels, in kernel bases."""
    moved = pl_src.basis * z_expand(top)
    solver = LeftSolver(pl_tgt.basis)
    rows = []
    for i in range(moved.rows):
        x = solver.solve(moved.row(i))
        if x is None:
            raise NotDiagonal("top map does not carry kernel to kernel")
        rows.append(x)
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class TateDiagonal:
    """The induced Tate-level data of a doubled chain map."""

    nu: IntMatrix                   # on nontrivial Tate classes, reduced
    nu_fixed: IntMatrix             # exact induced map on fixed bases
    dual_fixed: IntMatrix           # exact induced map on dual fixed bases
    invariants: tuple[int, ...]     # nontrivial Tate factors of the target
    pairing_source: IntMatrix
    pairing_target: IntMatrix


def tate_diagonal_check(h: DoubleChainMap) -> TateDiagonal:
    """Verify the diagonal-isometry shape on Tate groups and return nu.

    The middle map g_n* + f_n is block diagonal, so the induced map on
    L-hat* + L-hat is automatically block shaped; the content is that
    the two blocks are inverse-adjoint, i.e. that the evaluation
    pairing is preserved mod |G|, which is checked in adapted bases.
    """
    C, Cp = h.f.source, h.f.target
    order = C.group.order
    pl, plp = pi_top_lattice(C), pi_top_lattice(Cp)
    X_f = _kernel_matrix(pl, plp, h.f.mats[-1])
    X_g = _kernel_matrix(plp, pl, h.g.mats[-1])
    ft, ftp = fixed_and_tate(pl.lattice), fixed_and_tate(plp.lattice)
    ftd = fixed_and_tate(pl.lattice.dual())
    ftdp = fixed_and_tate(plp.lattice.dual())
    B, Bp = ft.adapted_basis, ftp.adapted_basis
    Bd, Bdp = ftd.adapted_basis, ftdp.adapted_basis
    F_fix = _induced_on_rows(B, X_f, Bp)
    F_dual = _induced_on_rows(Bd, X_g.transpose(), Bdp)
    T = Bd * B.transpose()
    Tp = Bdp * Bp.transpose()
    if not (F_dual * Tp * F_fix.transpose() - T).mod(order).is_zero():
        raise NotDiagonal("evaluation pairing is not preserved mod |G|")
    rows = [i for i, n_i in enumerate(ft.invariants) if n_i > 1]
    cols = [j for j, n_j in enumerate(ftp.invariants) if n_j > 1]
    nu = IntMatrix.from_rows(
        [[F_fix.data[i][j] % ftp.invariants[j] for j in cols]
         for i in rows]) if rows else IntMatrix.zero(0, len(cols))
    return TateDiagonal(nu, F_fix, F_dual,
                        tuple(ftp.invariants[j] for j in cols), T, Tp)


def quadratic_bias_class(C: AlgebraicComplex, Cp: AlgebraicComplex,
                         m: int, d: int, n: int,
                         D: UnitSubgroup) -> UnitClass:
    """The bias determinant class in the quotient by plus-minus squares
    and D; trivial for odd n."""
    if n % 2 == 1:
        return class_of(m, 1, kth_powers(m, 1))
    f = lift_chain_map(C, Cp)
    X = induced_kernel_map(f)
    r = det(X) % m
    if math.gcd(r, m) != 1:
        raise NotAUnit(f"induced determinant {r} is not a unit mod {m}")
    return class_of(m, r, product(minus_one(m), kth_powers(m, 2), D))
