"""Exact integer linear algebra: SNF, kernels, solvers, quotients."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from biaslab.intlin import (IntMatrix, LeftSolver, cokernel_invariants, det,
                            kernel_basis, left_kernel_basis,
                            quotient_invariants, smith_normal_form)

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r, max_size=r)))


def is_unimodular(M):
    return abs(det(M)) == 1


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_snf_factorisation(rows):
    A = IntMatrix.from_rows(rows)
    snf = smith_normal_form(A)
    assert snf.U * A * snf.V == snf.S
    assert is_unimodular(snf.U) and is_unimodular(snf.V)
    diag = snf.diagonal()
    for a, b in zip(diag, diag[1:]):
        if b:
            assert a and b % a == 0


@given(small_matrices)
@settings(max_examples=100, deadline=None)
def test_kernel_bases_annihilate(rows):
    A = IntMatrix.from_rows(rows)
    K = kernel_basis(A)
    assert (A * K).is_zero()
    L = left_kernel_basis(A)
    assert (L * A).is_zero()
    assert L.rows + smith_normal_form(A).rank == A.rows


def test_left_kernel_is_saturated():
    # multiples of a primitive vector must already lie in the lattice
    A = IntMatrix.from_rows([[2, 4], [1, 2], [3, 6]])
    L = left_kernel_basis(A)
    solver = LeftSolver(L)
    assert solver.solve([1, -2, 0]) is not None
    assert solver.solve([0, 3, -1]) is not None


def test_left_solver_round_trip():
    rng = random.Random(7)
    for _ in range(40):
        A = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(3)]
                                 for _ in range(3)])
        solver = LeftSolver(A)
        x = [rng.randint(-5, 5) for _ in range(3)]
        b = (IntMatrix.from_rows([x]) * A).row(0)
        y = solver.solve(b)
        assert y is not None
        assert (IntMatrix.from_rows([y]) * A).row(0) == b


def test_cokernel_and_quotient_invariants():
    A = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert cokernel_invariants(A) == ((6,), 0)
    basis = IntMatrix.identity(2)
    sub = IntMatrix.from_rows([[3, 0], [0, 3]])
    assert quotient_invariants(basis, sub) == ((3, 3), 0)


def test_det_matches_snf_up_to_sign():
    A = IntMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    snf = smith_normal_form(A)
    prod = 1
    for x in snf.diagonal():
        prod *= x
    assert abs(det(A)) == prod
