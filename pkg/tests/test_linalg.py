import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qalg.errors import BadModulus, DimensionMismatch
from qalg.linalg import GF, is_prime

gf = GF(101)


def random_matrix(rng, rows, cols, p=101):
    return rng.integers(0, p, size=(rows, cols))


def test_modulus_must_be_prime():
    with pytest.raises(BadModulus):
        GF(100)
    GF(2)
    GF(101)


def test_is_prime_small_values():
    primes = [n for n in range(2, 60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


def test_rref_identity():
    reduced, pivots = gf.rref(np.eye(2, dtype=np.int64))
    assert np.array_equal(reduced, np.eye(2, dtype=np.int64))
    assert pivots == [0, 1]


def test_rref_zero():
    reduced, pivots = gf.rref(np.zeros((3, 3), dtype=np.int64))
    assert not reduced.any()
    assert pivots == []


def test_rref_dependent_rows():
    reduced, pivots = gf.rref([[1, 2], [2, 4]])
    assert np.array_equal(reduced, [[1, 2], [0, 0]])
    assert pivots == [0]


def test_kernel_identity_is_empty():
    k = gf.kernel_basis(np.eye(3, dtype=np.int64))
    assert k.shape == (3, 0)


def test_kernel_zero_matrix_is_full():
    k = gf.kernel_basis(np.zeros((2, 3), dtype=np.int64))
    assert k.shape == (3, 3)
    assert gf.rank(k.T) == 3


def test_kernel_single_row():
    m = gf.array([[1, 2]])
    k = gf.kernel_basis(m)
    assert k.shape == (2, 1)
    assert not gf.matmul(m, k).any()
    # canonical form: free column scaled to 1
    assert k[1, 0] == 1 and k[0, 0] == 99


def test_solve_identity():
    rhs = gf.array([4, 7])
    assert np.array_equal(gf.solve(np.eye(2, dtype=np.int64), rhs), rhs)


def test_solve_unsolvable():
    assert gf.solve(np.zeros((2, 2), dtype=np.int64), [1, 0]) is None


def test_solve_scalar_inverse_mod_5():
    g5 = GF(5)
    x = g5.solve([[2]], [1])
    assert x is not None and x[0] == 3


def test_solve_row_count_mismatch():
    with pytest.raises(DimensionMismatch):
        gf.solve(np.eye(2, dtype=np.int64), [1, 2, 3])


def test_subspace_operations_on_axes():
    e1 = gf.array([[1, 0]])
    e12 = gf.array([[1, 0], [0, 1]])
    assert np.array_equal(gf.intersect_subspaces(e1, e12), e1)
    e2 = gf.array([[0, 1]])
    assert gf.sum_subspaces(e1, e2).shape[0] == 2
    diag = gf.array([[1, 1]])
    assert not gf.subspace_contains(diag, [1, 0])
    assert gf.subspace_contains(diag, [2, 2])


def test_subspace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gf.sum_subspaces(gf.array([[1, 0]]), gf.array([[1, 0, 0]]))


def test_invert():
    m = gf.array([[1, 1], [0, 1]])
    inv = gf.invert(m)
    assert np.array_equal(gf.matmul(m, inv), np.eye(2, dtype=np.int64))
    assert gf.invert([[1, 1], [1, 1]]) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_rank_nullity_and_kernel(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, rows, cols)
    reduced, pivots = gf.rref(m)
    assert gf.rank(reduced) == len(pivots)
    k = gf.kernel_basis(m)
    assert k.shape[1] == cols - len(pivots)
    assert not gf.matmul(m, k).any()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_solve_is_exact_when_solvable(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, rows, cols)
    x_true = random_matrix(rng, cols, 1)
    rhs = gf.matmul(m, x_true)
    x = gf.solve(m, rhs)
    assert x is not None
    assert np.array_equal(gf.matmul(m, x), rhs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_grassmann_identity(seed, ambient):
    rng = np.random.default_rng(seed)
    a = gf.row_space(random_matrix(rng, rng.integers(0, ambient + 1), ambient))
    b = gf.row_space(random_matrix(rng, rng.integers(0, ambient + 1), ambient))
    inter = gf.intersect_subspaces(a, b)
    total = gf.sum_subspaces(a, b)
    assert total.shape[0] == a.shape[0] + b.shape[0] - inter.shape[0]
    for row in inter:
        assert gf.subspace_contains(a, row)
        assert gf.subspace_contains(b, row)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_row_space_is_canonical(seed, ambient):
    rng = np.random.default_rng(seed)
    base = random_matrix(rng, rng.integers(1, ambient + 1), ambient)
    shuffled = base[rng.permutation(base.shape[0])]
    scale = int(rng.integers(1, 101))
    assert np.array_equal(gf.row_space(base), gf.row_space(shuffled * scale % 101))
