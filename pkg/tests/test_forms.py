"""Eps-symmetric forms, G-lattices and the fixed/Tate machinery."""

import pytest

from biaslab.forms import (EpsForm, FormError, GLattice, evaluation_forms,
                           fixed_and_tate, hyperbolic, inverse_unimodular,
                           isometry_kind, met_fixed_form, metabolic,
                           regular_lattice, trivial_lattice)
from biaslab.groupring import FiniteGroupModel
from biaslab.intlin import IntMatrix


def test_eps_form_validation():
    EpsForm(0, 1, IntMatrix.from_rows([[2, 1], [1, 0]]))
    EpsForm(0, -1, IntMatrix.from_rows([[0, 3], [-3, 0]]))
    # skew entries that only cancel mod k
    EpsForm(5, -1, IntMatrix.from_rows([[0, 3], [2, 0]]))
    with pytest.raises(FormError):
        EpsForm(0, 2, IntMatrix.identity(2))
    with pytest.raises(FormError):
        EpsForm(0, 1, IntMatrix.from_rows([[0, 1], [2, 0]]))
    with pytest.raises(FormError):
        EpsForm(0, -1, IntMatrix.from_rows([[1, 1], [-1, 0]]))


def test_hyperbolic_and_metabolic_grams():
    h = hyperbolic(2, -1)
    assert h.rank == 4
    assert h.gram.data[0][2] == 1 and h.gram.data[2][0] == -1
    q = EpsForm(0, -1, IntMatrix.from_rows([[0, 5], [-5, 0]]))
    m = metabolic(q)
    assert m.rank == 4
    assert m.gram.data[2][3] == 5
    assert m.gram.data[2][0] == -1


def test_inverse_unimodular():
    A = IntMatrix.from_rows([[1, 2], [0, 1]])
    assert inverse_unimodular(A) * A == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_lattice_validation_rejects_bad_actions():
    G = FiniteGroupModel(False, (3,))
    with pytest.raises(ValueError):
        GLattice(G, [IntMatrix.from_rows([[-1]])])   # order 2, not 3
    G2 = FiniteGroupModel(False, (2, 2))
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    neg = IntMatrix.from_rows([[1, 0], [0, -1]])
    GLattice(G2, [swap, swap.scale(-1)])
    with pytest.raises(ValueError):
        GLattice(G2, [swap, neg])   # order-2 matrices that do not commute


def test_trivial_lattice_fixed_and_tate():
    G = FiniteGroupModel(False, (3,))
    L = trivial_lattice(G, 2)
    ft = fixed_and_tate(L)
    assert ft.fixed_basis.rows == 2
    assert ft.invariants == (3, 3)
    assert ft.tate_factors == (3, 3)


def test_regular_lattice_has_trivial_tate():
    G = FiniteGroupModel(False, (3,))
    L = regular_lattice(G)
    ft = fixed_and_tate(L)
    assert ft.fixed_basis.rows == 1      # the norm element spans L^G
    assert ft.invariants == (1,)
    assert ft.tate_factors == ()


def test_evaluation_forms_trivial_and_regular():
    G = FiniteGroupModel(False, (3,))
    ev = evaluation_forms(trivial_lattice(G, 1), -1)
    assert ev.betas == (1,)
    assert ev.e_fixed.gram == IntMatrix.from_rows([[0, 1], [-1, 0]])
    assert ev.e_tate.rank == 2           # beta = 1 is nonzero mod 3
    ev_reg = evaluation_forms(regular_lattice(G), -1)
    assert ev_reg.betas == (3,)
    assert ev_reg.e_tate.rank == 0       # beta = |G| dies in the Tate form


def test_pi2_lattice_of_rank_two_elementary_group():
    from biaslab.doubling import pi_top_lattice
    from biaslab.foxbias import complex_of_presentation, preset_abelian

    C = complex_of_presentation(preset_abelian((3, 3), 1))
    L = pi_top_lattice(C).lattice
    ft = fixed_and_tate(L)
    assert ft.tate_factors == (3,)
    ev = evaluation_forms(L, -1)
    order = L.group.order
    assert sorted(ev.betas) == sorted(order // n for n in ft.invariants)
    assert ev.e_tate.gram == IntMatrix.from_rows([[0, 3], [-3, 0]])
    assert ev.e_tate.k == 9


def test_met_fixed_form_requires_vanishing_on_fixed():
    G = FiniteGroupModel(False, (3,))
    L = regular_lattice(G)
    zero = IntMatrix.zero(3, 3)
    assert met_fixed_form(L, zero, -1).gram.data[0][1] == 3
    skew = IntMatrix.from_rows([[0, 1, -1], [-1, 0, 0], [1, 0, 0]])
    # every antisymmetric form kills the norm vector
    met_fixed_form(L, skew, -1)
    sym = IntMatrix.identity(3)
    with pytest.raises(FormError):
        met_fixed_form(L, sym, 1)


def test_isometry_kind_classification():
    F = hyperbolic(2, -1)
    Q = IntMatrix.from_rows([[1, 1], [0, 1]])
    Qinv_t = inverse_unimodular(Q).transpose()
    diag = IntMatrix.from_rows(
        [[1, 1, 0, 0], [0, 1, 0, 0],
         [0, 0, Qinv_t.data[0][0], Qinv_t.data[0][1]],
         [0, 0, Qinv_t.data[1][0], Qinv_t.data[1][1]]])
    assert isometry_kind(diag, F) == "diagonal"

    sym_payload = IntMatrix.from_rows(
        [[1, 0, 1, 2], [0, 1, 2, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert isometry_kind(sym_payload, F) == "triangular"

    skew_payload = IntMatrix.from_rows(
        [[1, 0, 0, 1], [0, 1, -1, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert isometry_kind(skew_payload, F) == "not-isometry"

    assert isometry_kind(F.gram, F) == "general"
    assert isometry_kind(IntMatrix.identity(4).scale(2), F) == "not-isometry"
