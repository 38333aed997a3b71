"""Acceptance gate: one pass/fail line per numbered criterion.

Run with `pytest -v tests/test_acceptance.py`; each test is one
criterion and carries its own runtime budget.  Criterion 10 includes a
counting-bound sweep whose literal claim is false for even square-free
orders; that test fails honestly and documents the counterexamples.
"""

import math
import random
import time

import pytest

from biaslab import grouphom, numfn, obstruction
from biaslab.doubling import (double, double_map, homology_pattern,
                              pi_top_lattice, tate_diagonal_check)
from biaslab.forms import evaluation_forms, fixed_and_tate, met_fixed_form
from biaslab.foxbias import (Automorphism, Presentation,
                             complex_of_presentation, compute_D_subgroup,
                             induced_kernel_map, lift_chain_map,
                             polarised_bias, preset_abelian, preset_q8p,
                             q8p_f_maps, q8p_g_maps, q8p_reference_d2)
from biaslab.groupring import FiniteGroupModel, augment
from biaslab.intlin import IntMatrix, det
from biaslab.unitary import (commutator_decompose, lift_square, three_step,
                             whitehead_decompose)
from biaslab.units import (class_of, minus_one, kth_powers, subgroup_elements,
                           units_mod)


def _budget(t0: float, seconds: float) -> None:
    assert time.monotonic() - t0 < seconds, f"over the {seconds}s budget"


def test_criterion_01_numerical_functions():
    t0 = time.monotonic()
    for d in range(2, 129):
        assert numfn.e_exact(d, 2) == d - 1
    for d in range(2, 129):
        for n in range(2, 129):
            assert numfn.s_exact(d, n) % 2 == (1 + math.comb(d + n, d)) % 2
    _budget(t0, 10)


def test_criterion_02_parity_tables():
    t0 = time.monotonic()
    report = numfn.parity_table_check(48, 48)
    assert report.e_mismatches == []
    assert report.s_mismatches == []
    assert report.s_closed_mismatches == []
    assert report.clean
    _budget(t0, 30)


def test_criterion_03_find_d():
    t0 = time.monotonic()
    for n in range(2, 65, 2):
        d = numfn.find_d(n)
        assert numfn.e_exact(d, n) % 2 == 0
        assert numfn.s_exact(d, n) % 2 == 1
    for n, expected in ((2, 3), (4, 4), (6, 3), (8, 8), (10, 3)):
        assert numfn.find_d(n) == expected
    assert numfn.find_d(3) == 5
    _budget(t0, 30)


@pytest.mark.parametrize("orders", [(5, 5), (3, 3, 3)])
def test_criterion_04_abelian_bias(orders):
    t0 = time.monotonic()
    m = orders[0]
    units = units_mod(m)
    complexes = {r: complex_of_presentation(preset_abelian(orders, r))
                 for r in units}
    bias = {}
    for r in units:
        for s in units:
            f = lift_chain_map(complexes[r], complexes[s])
            bias[r, s] = polarised_bias(f, m)
    for r in units:
        assert bias[r, 1].rep in (r % m, (-r) % m)
    for r in units:
        for s in units:
            for u in units:
                assert bias[r, s] * bias[s, u] == bias[r, u]
    _budget(t0, 120)


def test_criterion_05_q8_times_17_cubed():
    t0 = time.monotonic()
    p, r = 17, 3
    P1 = preset_q8p(p, 1)
    Pr = preset_q8p(p, r)
    group = P1.group
    # (a) the Presentation constructor verifies that every relator
    # vanishes and that the images generate; the order is 8 * 17^3
    assert group.order == 39304

    # (b) printed degree-2 boundary vs the Fox matrix: identical except
    # at (0, 1), where the two entries still have equal augmentation
    C1 = complex_of_presentation(P1)
    Cr = complex_of_presentation(Pr)
    for pres, C in ((P1, C1), (Pr, Cr)):
        ref = q8p_reference_d2(p, 1 if pres is P1 else r)
        mech = C.boundaries[1]
        for i in range(6):
            for j in range(3):
                if (i, j) == (0, 1):
                    assert augment(ref.data[i][j]) == augment(
                        mech.data[i][j])
                else:
                    assert (ref.data[i][j] - mech.data[i][j]).is_zero()

    # (c) the explicit chain maps verify
    f = q8p_f_maps(p, r, Cr, C1)
    x, y, a, b, c = group.generators()
    c_r = group.identity()
    for _ in range(r):
        c_r = group.mul(c_r, c)
    theta = Automorphism(group, [x, y, a, b, c_r])
    g = q8p_g_maps(p, r, C1, theta)

    # (d) induced maps on the rank-3 kernels
    assert induced_kernel_map(f) == IntMatrix.from_rows(
        [[1, 0, 0], [0, r, 0], [0, 0, 1]])
    assert induced_kernel_map(g) == IntMatrix.from_rows(
        [[1, 0, 0], [0, r, 0], [0, 0, r]])

    # (e) bias [r], twist image [r^2], D = squares, |B| = |B_Q| = 2
    assert polarised_bias(f, p) == class_of(p, r, minus_one(p))
    assert polarised_bias(g, p) == class_of(p, r * r, minus_one(p))
    D = compute_D_subgroup(C1, p, [(theta, g)])
    assert subgroup_elements(D) == subgroup_elements(kth_powers(p, 2))
    assert obstruction.B_group(p, D).order == 2
    assert obstruction.B_Q_group(p, 3, 2, D).order == 2
    _budget(t0, 300)


def test_criterion_06_square_lifting():
    t0 = time.monotonic()
    for m in (3, 5, 8, 9, 12, 17):
        for a_unit in units_mod(m):
            for eps in (1, -1):
                res = lift_square(a_unit, m, 3, eps)
                assert res.membership.is_member
                product = res.word.product()
                assert (product - res.target_split).mod(m).is_zero()
                expected = [pow(a_unit, 2, m), pow(a_unit, -2, m), 1, 1, 1, 1]
                assert res.target_interleaved == expected
    _budget(t0, 10)


def test_criterion_07_unitary_identities():
    t0 = time.monotonic()
    rng = random.Random(20260826)

    def sample(m):
        while True:
            A = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(2)]
                                     for _ in range(2)])
            d = det(A)
            if (m == 0 and d in (1, -1)) or (m and math.gcd(d, m) == 1):
                return A

    for m in (5, 9, 0):
        for _ in range(200):
            A, B = sample(m), sample(m)
            # each Decomposition verifies its identity on construction
            commutator_decompose(A, B, m)
            whitehead_decompose(A, m)
            three_step(A, m)
    _budget(t0, 60)


def _cyclic_presentation(m: int) -> Presentation:
    G = FiniteGroupModel(False, (m,))
    return Presentation(("a",), (((0, m),),), G, (G.generators()[0],))


def test_criterion_08_doubling_and_forms():
    t0 = time.monotonic()
    # the one-generator group has no twisted relator, so only the
    # identity pair M(f, g) is available there
    cases = [
        ([_cyclic_presentation(3)], True),
        ([preset_abelian((3, 3), r) for r in (1, 2)], True),
        ([preset_abelian((3, 3, 3), r) for r in (1, 2)], False),
    ]
    for presentations, full in cases:
        complexes = [complex_of_presentation(P) for P in presentations]
        C1 = complexes[0]
        D1 = double(C1)
        L = pi_top_lattice(C1).lattice
        if full:
            rank = L.rank
            assert homology_pattern(D1.complex) == [
                ((), 1), ((), 0), ((), 2 * rank), ((), 0), ((), 1)]
        ev = evaluation_forms(L, D1.eps)
        order = L.group.order
        invariants = ev.fixed.invariants
        assert sorted(ev.betas) == sorted(order // n for n in invariants)
        zero = IntMatrix.zero(L.rank, L.rank)
        assert met_fixed_form(L, zero, D1.eps) == ev.e_fixed
        for C_r in complexes:
            h = double_map(lift_chain_map(C_r, C1),
                           lift_chain_map(C1, C_r),
                           double(C_r), D1)
            td = tate_diagonal_check(h)   # raises NotDiagonal on failure
            assert td.nu.rows == len(ev.fixed.tate_factors)
    _budget(t0, 180)


@pytest.mark.parametrize("orders,expected",
                         [((3, 3), (3,)), ((3, 3, 3), (3, 3, 3))])
def test_criterion_09_tate_matches_group_homology(orders, expected):
    t0 = time.monotonic()
    C = complex_of_presentation(preset_abelian(orders, 1))
    ft = fixed_and_tate(pi_top_lattice(C).lattice)
    assert tuple(sorted(ft.tate_factors)) == tuple(
        sorted(grouphom.homology_abelian(orders, 2)))
    assert ft.tate_factors == expected
    _budget(t0, 60)


def test_criterion_10_counting_bounds():
    t0 = time.monotonic()
    D = obstruction.D_abelian((65, 65, 65), 2)
    BQ = obstruction.B_Q_group(65, 3, 2, D)
    assert BQ.order == 4
    assert BQ.order >= 2 ** (2 - 1)
    assert obstruction.gamma_prime(5, 3, 2) == 2
    for d in (2, 3, 4):
        for n in (2, 3, 4):
            assert obstruction.gamma_prime(2, d, n) == 1

    sweep = obstruction.examples_bound_check(3000)
    assert sweep.checked > 1800
    _budget(t0, 60)
    # the literal inequality |(Z/m)^x / +-squares| >= 2^(t-1) is false
    # for even square-free m: 2 contributes a prime factor without
    # doubling the quotient.  First counterexamples below; the bound
    # holds for every odd square-free m in the sweep, and with t the
    # number of odd prime factors it would hold everywhere.
    odd_failures = [f for f in sweep.failures if f[0] % 2 == 1]
    assert odd_failures == []
    assert sweep.failures == (), (
        "even square-free counterexamples, first few: "
        f"{sweep.failures[:4]}")
