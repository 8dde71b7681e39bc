"""Compressed sparse row matrices and the kernels the solvers build on.

The matrix type is immutable after construction and always canonical:
row offsets nondecreasing, column indices strictly increasing within each
row, duplicates summed and exact zeros dropped at assembly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class SparseMatrix:
    """Canonical CSR matrix over float64.

    Internally backed by ``scipy.sparse.csr_matrix``; the raw CSR arrays are
    exposed read-only through ``row_offsets``, ``col_indices`` and ``values``.
    """

    __slots__ = ("_csr",)

    def __init__(self, csr: sp.csr_matrix):
        csr = csr.tocsr().astype(np.float64)
        csr.sum_duplicates()
        csr.sort_indices()
        csr.eliminate_zeros()
        self._csr = csr

    # -- construction -------------------------------------------------

    @classmethod
    def from_triplets(cls, nrows, ncols, entries):
        """Build from (row, col, value) triplets; duplicates are summed."""
        if entries:
            rows, cols, vals = zip(*entries)
        else:
            rows, cols, vals = (), (), ()
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows:
                raise ValueError("row index out of range")
            if cols.min() < 0 or cols.max() >= ncols:
                raise ValueError("column index out of range")
        coo = sp.coo_matrix((vals, (rows, cols)), shape=(nrows, ncols))
        return cls(coo.tocsr())

    @classmethod
    def from_dense(cls, dense):
        return cls(sp.csr_matrix(np.asarray(dense, dtype=np.float64)))

    # -- structure ----------------------------------------------------

    @property
    def nrows(self):
        return self._csr.shape[0]

    @property
    def ncols(self):
        return self._csr.shape[1]

    @property
    def shape(self):
        return self._csr.shape

    @property
    def nnz(self):
        return self._csr.nnz

    @property
    def row_offsets(self):
        return self._csr.indptr

    @property
    def col_indices(self):
        return self._csr.indices

    @property
    def values(self):
        return self._csr.data

    def to_dense(self):
        return self._csr.toarray()

    def to_scipy(self):
        return self._csr

    # -- kernels ------------------------------------------------------

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.ncols:
            raise ValueError(
                f"dimension mismatch: matrix is {self.nrows}x{self.ncols}, "
                f"vector has length {x.shape[0]}"
            )
        return self._csr @ x

    def matvec_transpose(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.nrows:
            raise ValueError(
                f"dimension mismatch: matrix is {self.nrows}x{self.ncols}, "
                f"vector has length {x.shape[0]}"
            )
        return self._csr.T @ x

    def transpose(self):
        return SparseMatrix(self._csr.T.tocsr())

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.col_indices, other.col_indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return None  # pragma: no cover - not hashable

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def matvec(M: SparseMatrix, x):
    return M.matvec(x)


def matvec_transpose(M: SparseMatrix, x):
    return M.matvec_transpose(x)


def transpose(M: SparseMatrix) -> SparseMatrix:
    return M.transpose()


def identity(n) -> SparseMatrix:
    return SparseMatrix(sp.identity(n, format="csr"))


def diag(values) -> SparseMatrix:
    return SparseMatrix(sp.diags(np.asarray(values, dtype=np.float64)).tocsr())


def tridiag(n, a, b, c) -> SparseMatrix:
    """Order-n tridiagonal matrix: subdiagonal a, diagonal b, superdiagonal c."""
    if n < 1:
        raise ValueError("tridiag needs n >= 1")
    diags, offsets = [], []
    if n > 1:
        diags += [np.full(n - 1, a), np.full(n, b), np.full(n - 1, c)]
        offsets += [-1, 0, 1]
    else:
        diags, offsets = [np.full(1, b)], [0]
    return SparseMatrix(sp.diags(diags, offsets, shape=(n, n)).tocsr())


def kron(X: SparseMatrix, Y: SparseMatrix) -> SparseMatrix:
    out_rows = X.nrows * Y.nrows
    out_cols = X.ncols * Y.ncols
    if out_rows >= np.iinfo(np.int64).max or out_cols >= np.iinfo(np.int64).max:
        raise OverflowError("Kronecker product index space overflow")
    return SparseMatrix(sp.kron(X.to_scipy(), Y.to_scipy(), format="csr"))


def spmm(X: SparseMatrix, Y: SparseMatrix) -> SparseMatrix:
    if X.ncols != Y.nrows:
        raise ValueError(
            f"dimension mismatch: {X.nrows}x{X.ncols} times {Y.nrows}x{Y.ncols}"
        )
    return SparseMatrix((X.to_scipy() @ Y.to_scipy()).tocsr())


def frobenius_norm(M: SparseMatrix) -> float:
    return float(np.sqrt(np.sum(M.values**2)))


@dataclass(frozen=True)
class Norm2Estimate:
    value: float
    converged: bool
    iterations: int

    def __float__(self):
        return self.value


def power_norm2(apply_mtm, n, tol=1e-10, maxit=5000) -> Norm2Estimate:
    """Power iteration on a symmetric positive semidefinite operator M^T M.

    ``apply_mtm(x)`` must return (M^T M) x.  Seeded with ones/sqrt(n) for
    run-to-run reproducibility; returns sqrt of the dominant eigenvalue
    estimate.
    """
    x = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for k in range(1, maxit + 1):
        y = apply_mtm(x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return Norm2Estimate(0.0, True, k)
        lam_new = float(x @ y)
        x = y / ny
        if k > 1 and abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return Norm2Estimate(float(np.sqrt(max(lam_new, 0.0))), True, k)
        lam = lam_new
    return Norm2Estimate(float(np.sqrt(max(lam, 0.0))), False, maxit)


def norm2_estimate(M: SparseMatrix, tol=1e-10, maxit=5000) -> Norm2Estimate:
    """Spectral norm estimate of M by power iteration on M^T M."""
    if M.nnz == 0:
        return Norm2Estimate(0.0, True, 0)
    csr = M.to_scipy()

    def apply_mtm(x):
        return csr.T @ (csr @ x)

    return power_norm2(apply_mtm, M.ncols, tol=tol, maxit=maxit)
