"""CSR wrapper, constructors, products, and the seeded power-iteration
2-norm estimator."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddlekit import sparse
from saddlekit.sparse import SparseMatrix, norm2_estimate, power_norm2


def test_from_triplets_sums_duplicates():
    M = SparseMatrix.from_triplets(2, 3, [(0, 0, 1.0), (0, 0, 2.0),
                                          (1, 2, -4.0)])
    expect = np.array([[3.0, 0.0, 0.0], [0.0, 0.0, -4.0]])
    assert np.array_equal(M.to_dense(), expect)
    assert M.shape == (2, 3)
    assert M.nnz == 2


def test_from_triplets_bounds_check():
    with pytest.raises(ValueError):
        SparseMatrix.from_triplets(2, 2, [(2, 0, 1.0)])
    with pytest.raises(ValueError):
        SparseMatrix.from_triplets(2, 2, [(0, -1, 1.0)])


def test_dense_round_trip(rng):
    D = rng.standard_normal((5, 7))
    D[np.abs(D) < 0.6] = 0.0
    M = SparseMatrix.from_dense(D)
    assert np.array_equal(M.to_dense(), D)


def test_csr_accessors():
    M = SparseMatrix.from_dense(np.array([[1.0, 0.0], [2.0, 3.0]]))
    assert np.array_equal(M.row_offsets, [0, 1, 3])
    assert np.array_equal(M.col_indices, [0, 0, 1])
    assert np.array_equal(M.values, [1.0, 2.0, 3.0])


def test_matvec_matches_dense(rng):
    D = rng.standard_normal((6, 4))
    M = SparseMatrix.from_dense(D)
    x = rng.standard_normal(4)
    y = rng.standard_normal(6)
    assert np.allclose(M.matvec(x), D @ x)
    assert np.allclose(M.matvec_transpose(y), D.T @ y)
    assert np.allclose(sparse.matvec(M, x), D @ x)
    assert np.allclose(sparse.matvec_transpose(M, y), D.T @ y)


def test_matvec_dimension_error():
    M = SparseMatrix.from_dense(np.eye(3))
    with pytest.raises(ValueError):
        M.matvec(np.ones(4))
    with pytest.raises(ValueError):
        M.matvec_transpose(np.ones(2))


def test_transpose(rng):
    D = rng.standard_normal((3, 5))
    M = SparseMatrix.from_dense(D)
    assert np.array_equal(M.transpose().to_dense(), D.T)
    assert np.array_equal(sparse.transpose(M).to_dense(), D.T)


def test_structural_equality():
    A = SparseMatrix.from_dense(np.array([[1.0, 2.0], [0.0, 3.0]]))
    B = SparseMatrix.from_dense(np.array([[1.0, 2.0], [0.0, 3.0]]))
    C = SparseMatrix.from_dense(np.array([[1.0, 2.0], [0.0, 4.0]]))
    assert A == B
    assert A != C
    assert A != "not a matrix"


def test_identity_diag_tridiag():
    assert np.array_equal(sparse.identity(3).to_dense(), np.eye(3))
    assert np.array_equal(sparse.diag([1.0, 2.0]).to_dense(),
                          np.diag([1.0, 2.0]))
    T = sparse.tridiag(4, -1.0, 2.0, -1.0).to_dense()
    expect = 2.0 * np.eye(4) - np.eye(4, k=1) - np.eye(4, k=-1)
    assert np.array_equal(T, expect)
    # asymmetric stencil
    T2 = sparse.tridiag(3, 0.0, 1.0, -1.0).to_dense()
    assert np.array_equal(T2, np.eye(3) - np.eye(3, k=1))


def test_kron_matches_numpy(rng):
    X = SparseMatrix.from_dense(rng.standard_normal((2, 3)))
    Y = SparseMatrix.from_dense(rng.standard_normal((3, 2)))
    K = sparse.kron(X, Y)
    assert np.allclose(K.to_dense(), np.kron(X.to_dense(), Y.to_dense()))


def test_spmm_matches_dense(rng):
    X = SparseMatrix.from_dense(rng.standard_normal((4, 6)))
    Y = SparseMatrix.from_dense(rng.standard_normal((6, 3)))
    P = sparse.spmm(X, Y)
    assert np.allclose(P.to_dense(), X.to_dense() @ Y.to_dense())


def test_frobenius_norm(rng):
    D = rng.standard_normal((5, 5))
    M = SparseMatrix.from_dense(D)
    assert sparse.frobenius_norm(M) == pytest.approx(np.linalg.norm(D, "fro"))


def test_power_norm2_against_svd(rng):
    D = rng.standard_normal((8, 8))
    est = power_norm2(lambda x: D.T @ (D @ x), 8, tol=1e-12)
    assert est.converged
    assert float(est) == pytest.approx(np.linalg.norm(D, 2), rel=1e-8)


def test_power_norm2_deterministic():
    D = np.diag([3.0, 1.0, 0.5])
    e1 = power_norm2(lambda x: D @ (D @ x), 3)
    e2 = power_norm2(lambda x: D @ (D @ x), 3)
    assert float(e1) == float(e2) == pytest.approx(3.0)


def test_norm2_estimate_empty_matrix():
    Z = SparseMatrix.from_dense(np.zeros((4, 4)))
    assert float(norm2_estimate(Z)) == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**31 - 1))
def test_norm2_estimate_matches_svd(k, seed):
    D = np.random.default_rng(seed).standard_normal((k, k))
    est = norm2_estimate(SparseMatrix.from_dense(D), tol=1e-12)
    # power iteration approaches the top singular value from below
    assert float(est) <= np.linalg.norm(D, 2) * (1 + 1e-8)
    assert float(est) >= 0.0
