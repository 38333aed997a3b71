"""Integral homology of the finite groups in play, plus the closed form."""

import pytest

from biaslab.grouphom import (compare_closed_form, homology_abelian,
                              homology_cyclic, homology_q8,
                              homology_q8_times_abelian, nu)


def test_cyclic_homology_period_two():
    assert homology_cyclic(5, 0) == (0,)
    assert homology_cyclic(5, 1) == (5,)
    assert homology_cyclic(5, 2) == ()
    assert homology_cyclic(5, 3) == (5,)


def test_kunneth_examples():
    assert homology_abelian((3, 3), 2) == (3,)
    assert homology_abelian((3, 3), 1) == (3, 3)
    assert homology_abelian((3, 3, 3), 2) == (3, 3, 3)
    assert homology_abelian((5, 5, 5), 2) == (5, 5, 5)
    assert homology_abelian((65, 65, 65), 2) == (65, 65, 65)


def test_q8_homology_period_four():
    assert homology_q8(0) == (0,)
    assert homology_q8(1) == (2, 2)
    assert homology_q8(2) == ()
    assert homology_q8(3) == (8,)
    assert homology_q8(5) == (2, 2)
    assert homology_q8(4) == ()


def test_q8_times_p_cubed():
    assert homology_q8_times_abelian((17, 17, 17), 2) == (17, 17, 17)
    assert homology_q8_times_abelian((3, 3, 3), 2) == (3, 3, 3)


def test_nu_counts():
    # alternating-sum definition cross-checked on small values
    import math
    for n in range(1, 6):
        for k in range(2, 6):
            expected = sum((-1) ** (n + j) * math.comb(k + j - 1, j)
                           for j in range(n + 1))
            assert nu(n, k) == expected


def test_closed_form_comparisons():
    agree = compare_closed_form(5, 3, 1)
    assert agree.agree
    mismatch = compare_closed_form(5, 3, 2)
    assert not mismatch.agree
    assert mismatch.kunneth == (5, 5, 5)
    mismatch_t = compare_closed_form(9, 3, 2, t=3)
    assert not mismatch_t.agree
    assert mismatch_t.kunneth == (3, 3, 3, 9, 9, 9)


def test_closed_form_rejects_bad_t():
    with pytest.raises(ValueError):
        compare_closed_form(9, 3, 2, t=2)
