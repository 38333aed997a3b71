"""Unit groups mod m, subgroups, cosets, and unit classes."""

import pytest

from biaslab.units import (NotAUnit, carmichael, class_of,
                           coset_representatives, cyclic_factors, generated,
                           kth_powers, minus_one, minus_times_kth_powers,
                           product, quotient_order, unit_group_order,
                           units_mod)


def test_orders_and_carmichael():
    assert unit_group_order(12) == 4
    assert unit_group_order(17) == 16
    assert carmichael(8) == 2
    assert carmichael(65) == 12


def test_cyclic_factors_multiply_to_order():
    for m in (5, 8, 12, 65, 72):
        prod = 1
        for f in cyclic_factors(m):
            prod *= f
        assert prod == unit_group_order(m)


def test_minus_one_and_squares():
    squares = kth_powers(17, 2)
    assert quotient_order(17, squares) == 2
    pm = product(minus_one(17), squares)
    # -1 = 16 = 4^2 is already a square mod 17
    assert quotient_order(17, pm) == 2
    assert quotient_order(7, product(minus_one(7), kth_powers(7, 2))) == 1


def test_generated_subgroup_and_cosets():
    sub = generated(17, (2,))
    reps = coset_representatives(17, sub)
    assert len(reps) * quotient_order(17, sub) ** 0 >= 1
    assert len(set(reps)) == len(reps)


def test_unit_class_arithmetic():
    squares = kth_powers(17, 2)
    c3 = class_of(17, 3, squares)
    assert not c3.is_identity()
    assert (c3 * c3).is_identity()   # 9 is a square
    with pytest.raises(NotAUnit):
        class_of(10, 5, kth_powers(10, 1))


def test_minus_times_kth_powers_contains_both():
    sub = minus_times_kth_powers(13, 3)
    elems = set(units_mod(13))
    assert 12 in _elements(sub) and pow(2, 3, 13) in _elements(sub)
    assert _elements(sub) <= elems


def _elements(sub):
    from biaslab.units import subgroup_elements
    return set(subgroup_elements(sub))
