"""Occupation-number basis and second-quantized bosonic operators.

The bath has M=4 localized modes ordered (L,0), (R,0), (L,1), (R,1), where
L/R is the well and 0/1 the band. Operators are stored as the upper
triangle of a Hermitian matrix in COO form; the conjugate transpose is
implicit, which makes Hermiticity structural rather than numerical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import _kernels

#: (well, band) -> mode index, in the conventional order.
MODE_ORDER = (("L", 0), ("R", 0), ("L", 1), ("R", 1))

DEFAULT_DIMENSION_CAP = 10**6


class BasisTooLargeError(ValueError):
    """Raised when the requested basis exceeds the dimension cap."""


def mode_index(well: str, band: int) -> int:
    """Map (well, band) to the conventional mode index."""
    try:
        return MODE_ORDER.index((well, band))
    except ValueError:
        raise ValueError(f"no mode (well={well!r}, band={band})") from None


def mode_label(index: int) -> tuple[str, int]:
    """Inverse of mode_index."""
    return MODE_ORDER[index]


class FockState(NamedTuple):
    occupations: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.occupations)


def apply_ladder(state: FockState, mode: int, kind: str):
    """Apply a single ladder operator to a Fock state.

    Returns (new_state, amplitude) with amplitude sqrt(n) for "annihilate"
    and sqrt(n+1) for "create", or None when annihilating an empty mode.
    """
    occ = list(state.occupations)
    n = occ[mode]
    if kind == "annihilate":
        if n == 0:
            return None
        occ[mode] = n - 1
        return FockState(tuple(occ)), math.sqrt(n)
    if kind == "create":
        occ[mode] = n + 1
        return FockState(tuple(occ)), math.sqrt(n + 1)
    raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")


@dataclass(frozen=True)
class FockBasis:
    """All occupation vectors of n_particles bosons in n_modes modes.

    States are ordered lexicographically descending, which makes the
    ordering deterministic and gives a cheap inverse lookup through integer
    keys.
    """

    n_modes: int
    n_particles: int
    occupations: np.ndarray  # (D, M) int64
    _keys: np.ndarray = field(repr=False)          # encoded key per state
    _sorted_keys: np.ndarray = field(repr=False)
    _sort_order: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.occupations.shape[0]

    def _encode(self, occ_rows: np.ndarray) -> np.ndarray:
        base = self.n_particles + 1
        powers = base ** np.arange(self.n_modes, dtype=np.int64)
        return occ_rows @ powers

    def index_of(self, occupations) -> int:
        """Basis index of one occupation vector; raises KeyError if absent."""
        row = np.asarray(occupations, dtype=np.int64).reshape(1, -1)
        return int(self.index_rows(row)[0])

    def index_rows(self, occ_rows: np.ndarray) -> np.ndarray:
        """Vectorized lookup of many occupation vectors."""
        keys = self._encode(occ_rows)
        pos = np.searchsorted(self._sorted_keys, keys)
        if np.any(pos >= len(self._sorted_keys)) or np.any(
            self._sorted_keys[np.minimum(pos, len(self._sorted_keys) - 1)] != keys
        ):
            raise KeyError("occupation vector not in basis")
        return self._sort_order[pos]

    def state(self, k: int) -> FockState:
        return FockState(tuple(int(n) for n in self.occupations[k]))


def basis_dimension(n_modes: int, n_particles: int) -> int:
    return math.comb(n_particles + n_modes - 1, n_modes - 1)


def enumerate_basis(
    n_modes: int, n_particles: int, dimension_cap: int = DEFAULT_DIMENSION_CAP
) -> FockBasis:
    """Enumerate all N-particle occupation vectors, lexicographically descending."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if n_particles < 0:
        raise ValueError("n_particles must be >= 0")
    dim = basis_dimension(n_modes, n_particles)
    if dim > dimension_cap:
        raise BasisTooLargeError(
            f"basis dimension {dim} exceeds cap {dimension_cap} "
            f"(n_modes={n_modes}, n_particles={n_particles}); raise dimension_cap "
            "explicitly if this size is intended"
        )
    rows = np.empty((dim, n_modes), dtype=np.int64)
    k = 0

    def fill(prefix: list, remaining: int, modes_left: int):
        nonlocal k
        if modes_left == 1:
            rows[k, : len(prefix)] = prefix
            rows[k, -1] = remaining
            k += 1
            return
        for n in range(remaining, -1, -1):
            fill(prefix + [n], remaining - n, modes_left - 1)

    fill([], n_particles, n_modes)
    base = n_particles + 1
    powers = base ** np.arange(n_modes, dtype=np.int64)
    keys = rows @ powers
    order = np.argsort(keys)
    return FockBasis(
        n_modes=n_modes,
        n_particles=n_particles,
        occupations=rows,
        _keys=keys,
        _sorted_keys=keys[order],
        _sort_order=order,
    )


class SparseHermitianOperator:
    """Hermitian operator stored as the upper triangle in COO form.

    Entries satisfy row <= col with each pair stored once; the implicit
    conjugate transpose completes the matrix, so the dense materialization
    is exactly equal to its conjugate transpose. Immutable after
    construction; matvec is pure.
    """

    def __init__(self, dimension: int, rows, cols, vals):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        cols = np.ascontiguousarray(cols, dtype=np.int64)
        vals = np.ascontiguousarray(vals, dtype=np.complex128)
        if not (rows.shape == cols.shape == vals.shape):
            raise ValueError("rows, cols, vals must have equal length")
        # fold any lower-triangle input entries onto the upper triangle
        below = rows > cols
        if np.any(below):
            rows = rows.copy()
            cols = cols.copy()
            vals = vals.copy()
            r = rows[below]
            rows[below] = cols[below]
            cols[below] = r
            vals[below] = np.conj(vals[below])
        # combine duplicates, sort row-major
        lin = rows * dimension + cols
        uniq, inverse = np.unique(lin, return_inverse=True)
        merged = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(merged, inverse, vals)
        rows = (uniq // dimension).astype(np.int64)
        cols = (uniq % dimension).astype(np.int64)
        diag = rows == cols
        if np.any(np.abs(merged[diag].imag) > 1e-12):
            raise ValueError("diagonal entries must be real")
        merged[diag] = merged[diag].real
        keep = merged != 0
        self.dimension = int(dimension)
        self.rows = np.ascontiguousarray(rows[keep])
        self.cols = np.ascontiguousarray(cols[keep])
        self.vals = np.ascontiguousarray(merged[keep])
        self._real_vals = None
        if np.all(self.vals.imag == 0):
            self._real_vals = np.ascontiguousarray(self.vals.real)
        self._csr_upper = None
        self._csr_lower = None

    @property
    def nnz(self) -> int:
        return len(self.vals)

    @property
    def is_real(self) -> bool:
        return self._real_vals is not None

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.dimension)
        on = self.rows == self.cols
        d[self.rows[on]] = self.vals[on].real
        return d

    def _csr_pair(self):
        if self._csr_upper is None:
            n = self.dimension
            dtype = np.float64 if self.is_real else np.complex128
            v = self._real_vals if self.is_real else self.vals
            upper = sp.csr_matrix((v, (self.rows, self.cols)), shape=(n, n), dtype=dtype)
            off = self.rows != self.cols
            lower = sp.csr_matrix(
                (np.conj(v[off]), (self.cols[off], self.rows[off])),
                shape=(n, n),
                dtype=dtype,
            )
            self._csr_upper = upper
            self._csr_lower = lower
        return self._csr_upper, self._csr_lower

    def matvec(self, x: np.ndarray, backend: str | None = None) -> np.ndarray:
        """Full Hermitian action on a vector."""
        x = np.asarray(x)
        if x.shape != (self.dimension,):
            raise ValueError(
                f"vector has shape {x.shape}, operator dimension is {self.dimension}"
            )
        backend = backend or _kernels.BACKEND
        if backend == "compiled" and _kernels.BACKEND == "compiled":
            xc = np.ascontiguousarray(x, dtype=np.complex128)
            y = np.zeros(self.dimension, dtype=np.complex128)
            if self.is_real:
                _kernels.hermitian_matvec_real(self.rows, self.cols, self._real_vals, xc, y)
            else:
                _kernels.hermitian_matvec_complex(self.rows, self.cols, self.vals, xc, y)
            return y
        upper, lower = self._csr_pair()
        return upper @ x + lower @ x

    def expectation(self, x: np.ndarray) -> float:
        """<x|A|x>, real by Hermiticity."""
        return float(np.vdot(x, self.matvec(x)).real)

    def to_csr(self) -> sp.csr_matrix:
        """Fully materialized sparse form (both triangles)."""
        upper, lower = self._csr_pair()
        return (upper + lower).tocsr()

    def to_dense(self) -> np.ndarray:
        """Dense materialization; real symmetric when all entries are real."""
        dtype = np.float64 if self.is_real else np.complex128
        h = np.zeros((self.dimension, self.dimension), dtype=dtype)
        v = self._real_vals if self.is_real else self.vals
        h[self.rows, self.cols] = v
        off = self.rows != self.cols
        h[self.cols[off], self.rows[off]] = np.conj(v[off])
        return h

    def __add__(self, other: "SparseHermitianOperator") -> "SparseHermitianOperator":
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return SparseHermitianOperator(
            self.dimension,
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            np.concatenate([self.vals, other.vals]),
        )

    def scaled(self, factor: float) -> "SparseHermitianOperator":
        return SparseHermitianOperator(self.dimension, self.rows, self.cols, self.vals * factor)


def _ladder_entries(basis: FockBasis, create: int, destroy: int):
    """COO entries of b†_create b_destroy over the whole basis (create != destroy)."""
    occ = basis.occupations
    src = np.nonzero(occ[:, destroy] > 0)[0]
    if len(src) == 0:
        return src, src, np.empty(0)
    amp = np.sqrt(occ[src, destroy] * (occ[src, create] + 1.0))
    target = occ[src].copy()
    target[:, destroy] -= 1
    target[:, create] += 1
    tgt = basis.index_rows(target)
    return tgt, src, amp


def _pair_entries(basis: FockBasis, create: int, destroy: int):
    """COO entries of b†_c b†_c b_d b_d over the whole basis (c != d)."""
    occ = basis.occupations
    src = np.nonzero(occ[:, destroy] >= 2)[0]
    if len(src) == 0:
        return src, src, np.empty(0)
    ni = occ[src, create].astype(float)
    nj = occ[src, destroy].astype(float)
    amp = np.sqrt((ni + 1.0) * (ni + 2.0) * nj * (nj - 1.0))
    target = occ[src].copy()
    target[:, destroy] -= 2
    target[:, create] += 2
    tgt = basis.index_rows(target)
    return tgt, src, amp


def build_hopping(basis: FockBasis, i: int, j: int, coeff: float) -> SparseHermitianOperator:
    """coeff * (b†_i b_j + b†_j b_i); the h.c. term comes from the implicit triangle."""
    if i == j:
        raise ValueError("hopping requires two distinct modes")
    rows, cols, amps = _ladder_entries(basis, i, j)
    return SparseHermitianOperator(basis.dimension, rows, cols, coeff * amps)


def build_density_terms(
    basis: FockBasis, kind: str, i: int, j: int | None = None, coeff: float = 1.0
) -> SparseHermitianOperator:
    """Density-type terms of the Hamiltonian.

    kind: "occupation" -> coeff*n_i, "onsite" -> coeff*n_i(n_i-1),
    "density_density" -> coeff*n_i*n_j,
    "pair_transfer" -> coeff*(b†_i b†_i b_j b_j + h.c.).
    """
    occ = basis.occupations
    d = np.arange(basis.dimension, dtype=np.int64)
    if kind == "occupation":
        vals = coeff * occ[:, i].astype(float)
        return SparseHermitianOperator(basis.dimension, d, d, vals)
    if kind == "onsite":
        n = occ[:, i].astype(float)
        return SparseHermitianOperator(basis.dimension, d, d, coeff * n * (n - 1.0))
    if kind == "density_density":
        if j is None or j == i:
            raise ValueError("density_density requires a distinct second mode")
        vals = coeff * (occ[:, i] * occ[:, j]).astype(float)
        return SparseHermitianOperator(basis.dimension, d, d, vals)
    if kind == "pair_transfer":
        if j is None or j == i:
            raise ValueError("pair_transfer requires a distinct second mode")
        rows, cols, amps = _pair_entries(basis, i, j)
        return SparseHermitianOperator(basis.dimension, rows, cols, coeff * amps)
    raise ValueError(f"unknown density term kind {kind!r}")


def one_body_entries(basis: FockBasis, coeffs: np.ndarray):
    """Full (unfolded) COO entries of sum_ab coeffs[a,b] b†_a b_b.

    Used for off-diagonal blocks of composite Hamiltonians where the
    Hermitian partner lives in a different block.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    m = basis.n_modes
    if coeffs.shape != (m, m):
        raise ValueError(f"coefficient matrix must be {m}x{m}")
    rows_list, cols_list, vals_list = [], [], []
    diag_idx = np.arange(basis.dimension, dtype=np.int64)
    occ = basis.occupations
    for a in range(m):
        for b in range(m):
            c = coeffs[a, b]
            if c == 0.0:
                continue
            if a == b:
                rows_list.append(diag_idx)
                cols_list.append(diag_idx)
                vals_list.append(c * occ[:, a].astype(float))
            else:
                r, s, amp = _ladder_entries(basis, a, b)
                rows_list.append(r)
                cols_list.append(s)
                vals_list.append(c * amp)
    rows = np.concatenate(rows_list) if rows_list else np.empty(0, dtype=np.int64)
    cols = np.concatenate(cols_list) if cols_list else np.empty(0, dtype=np.int64)
    vals = np.concatenate(vals_list) if vals_list else np.empty(0)
    return rows, cols, vals


def one_body_operator(basis: FockBasis, coeffs: np.ndarray) -> SparseHermitianOperator:
    """Hermitian one-body operator sum_ab coeffs[a,b] b†_a b_b (coeffs symmetric)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if not np.allclose(coeffs, coeffs.T, atol=1e-14):
        raise ValueError("one-body coefficient matrix must be symmetric")
    # keep each Hermitian pair once: diagonal + upper-triangle terms
    m = basis.n_modes
    rows_list, cols_list, vals_list = [], [], []
    diag_idx = np.arange(basis.dimension, dtype=np.int64)
    occ = basis.occupations
    for a in range(m):
        if coeffs[a, a] != 0.0:
            rows_list.append(diag_idx)
            cols_list.append(diag_idx)
            vals_list.append(coeffs[a, a] * occ[:, a].astype(float))
        for b in range(a + 1, m):
            if coeffs[a, b] == 0.0:
                continue
            r, s, amp = _ladder_entries(basis, a, b)
            rows_list.append(r)
            cols_list.append(s)
            vals_list.append(coeffs[a, b] * amp)
    rows = np.concatenate(rows_list) if rows_list else np.empty(0, dtype=np.int64)
    cols = np.concatenate(cols_list) if cols_list else np.empty(0, dtype=np.int64)
    vals = np.concatenate(vals_list) if vals_list else np.empty(0)
    return SparseHermitianOperator(basis.dimension, rows, cols, vals)


def total_number_operator(basis: FockBasis) -> SparseHermitianOperator:
    d = np.arange(basis.dimension, dtype=np.int64)
    vals = basis.occupations.sum(axis=1).astype(float)
    return SparseHermitianOperator(basis.dimension, d, d, vals)
