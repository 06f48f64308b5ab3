"""Dense-vector and sparse-matrix kernels.

Vectors are plain 1-D float64 numpy arrays.  The sparse type is a thin
validated CSR container; products are delegated to scipy.sparse, which
accumulates row-wise in C with dense-dot ordering.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError

POWER_ITERATION_SEED = 0x5EED


def as_vector(x) -> np.ndarray:
    """Coerce to a contiguous 1-D float64 array."""
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def dot(a, b) -> float:
    a, b = as_vector(a), as_vector(b)
    if a.shape != b.shape:
        raise DimensionError(f"dot: lengths differ ({a.size} vs {b.size})")
    return float(np.dot(a, b))


def axpby(alpha: float, x, beta: float, y) -> np.ndarray:
    """Elementwise alpha*x + beta*y."""
    x, y = as_vector(x), as_vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"axpby: lengths differ ({x.size} vs {y.size})")
    return alpha * x + beta * y


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """Compressed-sparse-row matrix with validated structure.

    Invariants enforced at construction: monotone row offsets consistent
    with the data arrays, in-bounds column indices that are strictly
    increasing within each row, and finite values.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_offsets",
                           np.ascontiguousarray(self.row_offsets, dtype=np.int64))
        object.__setattr__(self, "col_indices",
                           np.ascontiguousarray(self.col_indices, dtype=np.int64))
        object.__setattr__(self, "values",
                           np.ascontiguousarray(self.values, dtype=np.float64))
        ro, ci, vals = self.row_offsets, self.col_indices, self.values
        if self.n_rows < 0 or self.n_cols < 0:
            raise DimensionError("matrix dimensions must be non-negative")
        if ro.size != self.n_rows + 1:
            raise DimensionError("row_offsets must have length n_rows + 1")
        if ro[0] != 0 or np.any(np.diff(ro) < 0):
            raise DimensionError("row_offsets must start at 0 and be non-decreasing")
        if ro[-1] != vals.size or ci.size != vals.size:
            raise DimensionError("row_offsets[-1] must equal nnz")
        if ci.size and (ci.min() < 0 or ci.max() >= self.n_cols):
            raise DimensionError("column index out of bounds")
        # strictly increasing column indices within each row
        if ci.size > 1:
            inside = np.ones(ci.size, dtype=bool)
            starts = ro[1:-1]
            inside[starts[starts < ci.size]] = False  # first entry of each row
            if np.any((np.diff(ci) <= 0) & inside[1:]):
                raise DimensionError("column indices must be strictly increasing within a row")
        if vals.size and not np.all(np.isfinite(vals)):
            raise DimensionError("matrix values must be finite")

    @cached_property
    def _scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.values, self.col_indices, self.row_offsets),
                             shape=(self.n_rows, self.n_cols))

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    def to_dense(self) -> np.ndarray:
        return self._scipy.toarray()

    @classmethod
    def from_dense(cls, dense) -> "CsrMatrix":
        m = sp.csr_matrix(np.asarray(dense, dtype=np.float64))
        m.sort_indices()
        return cls(m.shape[0], m.shape[1], m.indptr, m.indices, m.data)

    @classmethod
    def from_diagonal(cls, diag) -> "CsrMatrix":
        d = as_vector(diag)
        n = d.size
        return cls(n, n, np.arange(n + 1), np.arange(n), d)

    @classmethod
    def from_rows(cls, rows, n_cols: int) -> "CsrMatrix":
        """Build from a list of per-row (col_index, value) pairs."""
        offsets = [0]
        cols, vals = [], []
        for row in rows:
            for c, v in row:
                cols.append(c)
                vals.append(v)
            offsets.append(len(cols))
        return cls(len(rows), n_cols, np.asarray(offsets),
                   np.asarray(cols, dtype=np.int64),
                   np.asarray(vals, dtype=np.float64))


def spmv(a: CsrMatrix, x) -> np.ndarray:
    """CSR matrix-vector product A @ x."""
    x = as_vector(x)
    if x.size != a.n_cols:
        raise DimensionError(f"spmv: vector length {x.size} != n_cols {a.n_cols}")
    return a._scipy.dot(x)


def spmv_transpose(a: CsrMatrix, x) -> np.ndarray:
    """CSR transposed product A.T @ x."""
    x = as_vector(x)
    if x.size != a.n_rows:
        raise DimensionError(f"spmv_transpose: vector length {x.size} != n_rows {a.n_rows}")
    return a._scipy.T.dot(x)


class SpectralEstimate(NamedTuple):
    value: float
    converged: bool
    iterations: int


def spectral_norm_sq(a: CsrMatrix, tol: float = 1e-8,
                     max_iters: int = 5000) -> SpectralEstimate:
    """Estimate lambda_max(A.T A) by power iteration.

    The start vector is pseudo-random from a fixed seed, so repeated calls
    are bit-reproducible.  Convergence is declared when the relative
    Rayleigh residual ||A.T A u - lam u|| / lam drops below `tol`; on
    non-convergence the best estimate is returned flagged accordingly.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a.n_rows == 0 or a.n_cols == 0:
        raise DimensionError("spectral_norm_sq: empty matrix")
    rng = np.random.default_rng(POWER_ITERATION_SEED)
    u = rng.standard_normal(a.n_cols)
    u /= np.linalg.norm(u)
    lam = 0.0
    for it in range(1, max_iters + 1):
        w = spmv_transpose(a, spmv(a, u))
        lam = float(np.dot(u, w))
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return SpectralEstimate(0.0, True, it)
        residual = np.linalg.norm(w - lam * u)
        if residual <= tol * max(lam, np.finfo(float).tiny):
            return SpectralEstimate(lam, True, it)
        u = w / norm_w
    return SpectralEstimate(lam, False, max_iters)
