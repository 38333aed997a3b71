"""Counting functions e and s, parity tables, and minimal-d search."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from biaslab.numfn import (binom_parity, e_exact, e_parity_table, find_d,
                           hockey_stick, parity_table_check, s_exact,
                           s_parity_closed, s_parity_table)


def test_e_frozen_values():
    # n = 2 collapses to d - 1
    assert [e_exact(d, 2) for d in range(2, 8)] == [1, 2, 3, 4, 5, 6]
    assert e_exact(1, 4) == 1
    assert e_exact(1, 5) == 3
    assert e_exact(3, 3) == 5
    assert e_exact(4, 4) == 16


def test_s_frozen_values():
    assert s_exact(2, 2) == 1
    assert s_exact(3, 2) == 3
    assert s_exact(2, 3) == 3
    assert s_exact(4, 4) == 21


def test_s_congruence():
    for d in range(2, 30):
        for n in range(2, 30):
            assert s_exact(d, n) % 2 == (1 + math.comb(d + n, d)) % 2


@given(st.integers(0, 400), st.integers(0, 400))
@settings(max_examples=200, deadline=None)
def test_binom_parity_is_lucas(a, b):
    assert binom_parity(a + b, a) == math.comb(a + b, a) % 2


def test_hockey_stick():
    for n in range(0, 8):
        for k in range(0, 8):
            assert hockey_stick(n, k) == sum(math.comb(j + k, k)
                                             for j in range(n + 1))


def test_parity_tables_match_exact_values():
    report = parity_table_check(32, 32)
    assert report.clean, (report.e_mismatches, report.s_mismatches)


def test_parity_closed_form_agrees():
    for d in range(2, 40):
        for n in range(2, 40):
            assert s_parity_closed(d, n) == s_exact(d, n) % 2
            assert s_parity_table(d, n) == s_exact(d, n) % 2
            assert e_parity_table(d, n) == e_exact(d, n) % 2


def test_find_d_witnesses():
    assert find_d(2) == 3
    assert find_d(4) == 4
    assert find_d(6) == 3
    assert find_d(8) == 8
    assert find_d(10) == 3
    assert find_d(3) == 5
    for n in range(2, 20):
        d = find_d(n)
        assert e_exact(d, n) % 2 == 0 and s_exact(d, n) % 2 == 1


def test_csv_shape():
    report = parity_table_check(4, 4)
    lines = report.to_csv().strip().splitlines()
    assert lines[0].startswith("d,n,")
    assert len(lines) == 1 + 3 * 3
