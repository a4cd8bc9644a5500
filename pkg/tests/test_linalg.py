import random
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from oracles import determinantal_divisors, naive_smith, random_matrix, rational_rank
from polyih.linalg import (
    dense_to_columns,
    determinant,
    integer_kernel_basis,
    matrix_rank_mod_p,
    nullspace,
    nullspace_mod_p,
    rank,
    rank_mod_p,
    smith_invariants,
    solve,
    solve_mod_p,
)

small_matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_known_invariant_factors():
    assert smith_invariants([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert smith_invariants([[0, 0], [0, 0]]) == []
    assert smith_invariants([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == [1, 1, 2]


def test_oracles_agree_with_sympy():
    rng = random.Random(7)
    for _ in range(60):
        a = random_matrix(rng, 8)
        assert naive_smith(a) == [int(v) for v in sympy_invariants(Matrix(a), domain=ZZ) if v]


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_smith_matches_determinantal_divisors(a):
    assert smith_invariants(a) == determinantal_divisors(a)


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_smith_factors_divide_and_give_rank(a):
    f = smith_invariants(a)
    assert all(y % x == 0 for x, y in zip(f, f[1:]))
    assert len(f) == rational_rank(a) == rank(a)


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.sampled_from([2, 3, 5, 7, 32003]))
def test_rank_mod_p_counts_factors_prime_to_p(a, p):
    expected = sum(1 for x in smith_invariants(a) if x % p)
    assert rank_mod_p(dense_to_columns(a), p) == expected
    assert matrix_rank_mod_p(np.array(a), p) == expected


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_integer_kernel_is_a_lattice_basis(a):
    n = len(a[0])
    K = integer_kernel_basis(a, n)
    assert len(K) == n - rank(a)
    for v in K:
        assert all(sum(r * x for r, x in zip(row, v)) == 0 for row in a)
    # saturated: the kernel basis extends to a unimodular matrix, so its
    # maximal minors have gcd 1
    if K:
        assert determinantal_divisors([list(col) for col in zip(*K)])[-1:] in ([1], [])


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rational_nullspace_and_solve(a):
    N = nullspace(a)
    assert len(N) == len(a[0]) - rank(a)
    for v in N:
        assert all(sum(Fraction(r) * x for r, x in zip(row, v)) == 0 for row in a)
    x0 = [Fraction(i + 1) for i in range(len(a[0]))]
    b = [sum(r * x for r, x in zip(row, x0)) for row in a]
    x = solve(a, b)
    assert [sum(r * xi for r, xi in zip(row, x)) for row in a] == b


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_modular_nullspace_and_solve(a):
    p = 32003
    A = np.array(a, dtype=np.int64)
    N = nullspace_mod_p(A, p)
    assert N.shape[1] == A.shape[1] - matrix_rank_mod_p(A, p)
    assert not np.any(A @ N % p)
    x0 = np.arange(1, A.shape[1] + 1, dtype=np.int64)
    x = solve_mod_p(A, A @ x0 % p, p)
    assert np.array_equal(A @ x % p, A @ x0 % p)


def test_inconsistent_system_has_no_solution():
    assert solve([[1, 1], [1, 1]], [0, 1]) is None
    assert solve_mod_p(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 5) is None
