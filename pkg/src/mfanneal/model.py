"""Problem representations: Ising models, QUBO instances, Max-Cut graphs.

All conversions carry explicit constant offsets so that objective values
match exactly across representations, not just "up to a constant".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class DimensionError(ValueError):
    """Raised when a vector does not match the problem dimension."""


@dataclass(frozen=True)
class CouplingMatrix:
    """Sparse symmetric coupling matrix with zero diagonal.

    Entries are stored once per unordered pair in canonical ``i < j`` order;
    the symmetric partner is implicit. Duplicate pairs and diagonal entries
    are rejected.

    Parameters
    ----------
    n : int
        Dimension.
    rows, cols : np.ndarray
        Index arrays with ``rows[k] < cols[k]``.
    weights : np.ndarray
        Coupling weights, one per stored pair.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    _csr: sp.csr_matrix = field(repr=False, compare=False, default=None)
    _dense: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        rows = np.asarray(self.rows, dtype=np.int64)
        cols = np.asarray(self.cols, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if not (rows.shape == cols.shape == weights.shape):
            raise ValueError("rows, cols, weights must have equal length")
        if rows.size:
            if min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= self.n:
                raise ValueError("index out of range")
            if np.any(rows == cols):
                raise ValueError("diagonal entries are not allowed")
            # canonicalize: i < j, sorted, duplicates rejected
            lo = np.minimum(rows, cols)
            hi = np.maximum(rows, cols)
            order = np.lexsort((hi, lo))
            lo, hi, weights = lo[order], hi[order], weights[order]
            pair_ids = lo * self.n + hi
            if np.unique(pair_ids).size != pair_ids.size:
                raise ValueError("duplicate coupling pair")
            rows, cols = lo, hi
        for arr in (rows, cols, weights):
            arr.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "weights", weights)
        full_r = np.concatenate([rows, cols])
        full_c = np.concatenate([cols, rows])
        full_w = np.concatenate([weights, weights])
        csr = sp.csr_matrix((full_w, (full_r, full_c)), shape=(self.n, self.n))
        object.__setattr__(self, "_csr", csr)
        # dense mirror: BLAS matvec beats sparse overhead on small systems
        if self.n <= 64:
            dense = csr.toarray()
            dense.flags.writeable = False
            object.__setattr__(self, "_dense", dense)
        else:
            object.__setattr__(self, "_dense", None)

    @classmethod
    def from_entries(cls, n, entries):
        """Build from an iterable of ``(i, j, weight)`` triples."""
        entries = list(entries)
        if not entries:
            z = np.zeros(0)
            return cls(n, z.astype(np.int64), z.astype(np.int64), z)
        rows, cols, weights = (np.asarray(x) for x in zip(*entries))
        return cls(n, rows, cols, weights)

    @classmethod
    def from_dense(cls, mat, tol=0.0):
        mat = np.asarray(mat, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(mat, mat.T, atol=1e-12, rtol=0.0):
            raise ValueError("matrix must be symmetric")
        if np.any(np.abs(np.diag(mat)) > tol):
            raise ValueError("diagonal must be zero")
        iu, ju = np.triu_indices(mat.shape[0], k=1)
        keep = mat[iu, ju] != 0.0
        return cls(mat.shape[0], iu[keep], ju[keep], mat[iu, ju][keep])

    @property
    def nnz_pairs(self) -> int:
        return int(self.weights.size)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Symmetric product ``(J v)_i = sum_j J_ij v_j``."""
        if self._dense is not None:
            return self._dense.dot(v)
        return self._csr.dot(v)

    def dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense.copy()
        return self._csr.toarray()

    def row_abs_sums(self) -> np.ndarray:
        return np.abs(self._csr).dot(np.ones(self.n))

    def scaled(self, factor: float) -> "CouplingMatrix":
        return CouplingMatrix(self.n, self.rows, self.cols, self.weights * factor)


@dataclass(frozen=True)
class IsingModel:
    """Spin model with energy ``-1/2 sum_ij J_ij S_i S_j - sum_i h_i S_i + offset``.

    The offset carries the constant accumulated by conversions from other
    representations, so round-trip energy checks are exact.
    """

    J: CouplingMatrix
    h: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float64)
        if h.shape != (self.J.n,):
            raise DimensionError(f"h has shape {h.shape}, expected ({self.J.n},)")
        h = h.copy()
        h.flags.writeable = False
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.J.n


@dataclass(frozen=True)
class QuboModel:
    """QUBO instance: minimize ``sum_ij Q_ij x_i x_j`` over binary vectors.

    ``Q`` is symmetric; diagonal entries are allowed. Stored as triples with
    ``i <= j``; the symmetric partner of an off-diagonal entry is implicit.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        cols = np.asarray(self.cols, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if not (rows.shape == cols.shape == weights.shape):
            raise ValueError("rows, cols, weights must have equal length")
        if rows.size:
            lo = np.minimum(rows, cols)
            hi = np.maximum(rows, cols)
            if lo.min() < 0 or hi.max() >= self.n:
                raise ValueError("index out of range")
            pair_ids = lo * self.n + hi
            if np.unique(pair_ids).size != pair_ids.size:
                raise ValueError("duplicate QUBO entry")
            rows, cols = lo, hi
        for arr in (rows, cols, weights):
            arr.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_dense(cls, mat):
        mat = np.asarray(mat, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(mat, mat.T, atol=1e-12, rtol=0.0):
            raise ValueError("QUBO matrix must be symmetric")
        iu, ju = np.triu_indices(mat.shape[0])
        keep = mat[iu, ju] != 0.0
        return cls(mat.shape[0], iu[keep], ju[keep], mat[iu, ju][keep])

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        out[self.rows, self.cols] = self.weights
        out[self.cols, self.rows] = self.weights
        return out


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph; each unordered edge stored once, no self-loops."""

    n_vertices: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape):
            raise ValueError("u, v, w must have equal length")
        if u.size:
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= self.n_vertices:
                raise ValueError("vertex index out of range")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            pair_ids = lo * self.n_vertices + hi
            if np.unique(pair_ids).size != pair_ids.size:
                raise ValueError("duplicate edge")
            u, v = lo, hi
        for arr in (u, v, w):
            arr.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_edges(cls, n_vertices, edges):
        edges = list(edges)
        if not edges:
            z = np.zeros(0)
            return cls(n_vertices, z.astype(np.int64), z.astype(np.int64), z)
        u, v, w = (np.asarray(x) for x in zip(*edges))
        return cls(n_vertices, u, v, w)

    @property
    def n_edges(self) -> int:
        return int(self.w.size)

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())


def as_spins(values) -> np.ndarray:
    """Validate and return a spin configuration (every component exactly +-1)."""
    s = np.asarray(values, dtype=np.float64)
    if not np.all(np.abs(s) == 1.0):
        raise ValueError("spin components must be exactly +1 or -1")
    return s


def ising_energy(model: IsingModel, spins) -> float:
    """Energy ``-1/2 sum_ij J_ij S_i S_j - sum_i h_i S_i + offset``.

    The double sum runs over ordered pairs, so each stored coupling
    contributes ``-J_ij S_i S_j`` once.
    """
    s = np.asarray(spins, dtype=np.float64)
    if s.shape != (model.n,):
        raise DimensionError(f"spins have shape {s.shape}, expected ({model.n},)")
    J = model.J
    quad = float(np.dot(J.weights, s[J.rows] * s[J.cols]))
    return -quad - float(np.dot(model.h, s)) + model.offset


def qubo_value(model: QuboModel, x) -> float:
    """Objective ``sum_ij Q_ij x_i x_j`` (full double sum, diagonal included)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n,):
        raise DimensionError(f"x has shape {x.shape}, expected ({model.n},)")
    if not np.all((x == 0.0) | (x == 1.0)):
        raise ValueError("x components must be 0 or 1")
    # off-diagonal pairs count twice (Q_ij and Q_ji), diagonal once
    mult = np.where(model.rows == model.cols, 1.0, 2.0)
    return float(np.dot(model.weights * mult, x[model.rows] * x[model.cols]))


def qubo_to_ising(model: QuboModel) -> IsingModel:
    """Exact QUBO -> Ising conversion under ``x_i = (1 + S_i) / 2``.

    ``J_ij = -Q_ij / 2`` for ``i != j``, ``h_i = -1/2 sum_j Q_ij``, and the
    offset absorbs the constant so objective values match on every input.
    """
    off_diag = model.rows != model.cols
    J = CouplingMatrix(
        model.n,
        model.rows[off_diag],
        model.cols[off_diag],
        -0.5 * model.weights[off_diag],
    )
    # row sums of the full symmetric Q
    row_sums = np.zeros(model.n)
    np.add.at(row_sums, model.rows, model.weights)
    np.add.at(row_sums, model.cols, np.where(off_diag, model.weights, 0.0))
    h = -0.5 * row_sums
    diag_sum = float(model.weights[~off_diag].sum())
    total = float(row_sums.sum())
    offset = 0.25 * total + 0.25 * diag_sum
    return IsingModel(J=J, h=h, offset=offset)


def maxcut_to_ising(g: WeightedGraph) -> IsingModel:
    """Max-Cut -> Ising with ``J_ij = -W_ij`` and ``h = 0``.

    The resulting energy satisfies ``E(S) = total_weight - 2 CV(S)``, so the
    cut value is recoverable from any spin configuration.
    """
    J = CouplingMatrix(g.n_vertices, g.u, g.v, -g.w)
    return IsingModel(J=J, h=np.zeros(g.n_vertices), offset=0.0)


def cut_value(g: WeightedGraph, spins) -> float:
    """Cut value ``sum_{i<j} W_ij (1 - S_i S_j) / 2``."""
    s = np.asarray(spins, dtype=np.float64)
    if s.shape != (g.n_vertices,):
        raise DimensionError(f"spins have shape {s.shape}, expected ({g.n_vertices},)")
    return float(np.dot(g.w, 0.5 * (1.0 - s[g.u] * s[g.v])))


def round_magnetization(m) -> np.ndarray:
    """Round magnetizations to spins: +1 for ``m_i >= 0``, else -1.

    The tie at exactly zero deterministically rounds to +1.
    """
    m = np.asarray(m, dtype=np.float64)
    if np.any(np.abs(m) > 1.0):
        raise ValueError("magnetizations must lie in [-1, 1]")
    return np.where(m >= 0.0, 1.0, -1.0)
