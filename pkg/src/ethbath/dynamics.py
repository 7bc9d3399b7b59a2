"""Exact unitary dynamics of the qubit-bath composite.

The composite basis is qubit-major: global index q*D + k for qubit level
q in {0,1} and bath state k. Propagation is either spectral (full dense
eigendecomposition, the reference) or Krylov (Lanczos short-time
exponentials with adaptive subspace size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bath import Eigensystem, diagonalize
from .fock import FockBasis, SparseHermitianOperator, one_body_entries, one_body_operator


@dataclass(frozen=True)
class CompositeBasis:
    bath_dimension: int

    @property
    def dimension(self) -> int:
        return 2 * self.bath_dimension

    def index(self, qubit_level: int, bath_index: int) -> int:
        if qubit_level not in (0, 1):
            raise ValueError("qubit level must be 0 or 1")
        if not 0 <= bath_index < self.bath_dimension:
            raise ValueError("bath index out of range")
        return qubit_level * self.bath_dimension + bath_index


@dataclass(frozen=True)
class CouplingBlocks:
    """Bath operators attached to the qubit channels.

    diag0/diag1 couple to |0><0| and |1><1|; flip couples to |0><1| (its
    conjugate block is implicit). flip is stored as full COO entries since
    its Hermitian partner lives in the other off-diagonal block.
    """

    diag0: SparseHermitianOperator | None
    diag1: SparseHermitianOperator | None
    flip_rows: np.ndarray
    flip_cols: np.ndarray
    flip_vals: np.ndarray

    @classmethod
    def from_c_tensor(cls, basis: FockBasis, c_tensor: np.ndarray) -> "CouplingBlocks":
        c = np.asarray(c_tensor, dtype=float)
        if c.shape != (2, 2, 4, 4):
            raise ValueError("C tensor must have shape (2, 2, 4, 4)")
        rows, cols, vals = one_body_entries(basis, c[0, 1])
        return cls(
            diag0=one_body_operator(basis, c[0, 0]),
            diag1=one_body_operator(basis, c[1, 1]),
            flip_rows=rows,
            flip_cols=cols,
            flip_vals=vals,
        )

    @classmethod
    def sigma_x(cls, bath_observable: SparseHermitianOperator) -> "CouplingBlocks":
        """g * sigma_x (x) O: pure energy-exchange coupling."""
        upper, lower = bath_observable._csr_pair()
        full = (upper + lower).tocoo()
        return cls(
            diag0=None,
            diag1=None,
            flip_rows=full.row.astype(np.int64),
            flip_cols=full.col.astype(np.int64),
            flip_vals=full.data,
        )

    @classmethod
    def sigma_z(cls, bath_observable: SparseHermitianOperator) -> "CouplingBlocks":
        """g * sigma_z (x) O: pure dephasing coupling."""
        empty = np.empty(0, dtype=np.int64)
        return cls(
            diag0=bath_observable,
            diag1=bath_observable.scaled(-1.0),
            flip_rows=empty,
            flip_cols=empty,
            flip_vals=np.empty(0),
        )


def build_composite_hamiltonian(
    delta: float,
    bath_op: SparseHermitianOperator,
    g: float,
    coupling: CouplingBlocks,
) -> SparseHermitianOperator:
    """H = H_S (x) 1 + 1 (x) H_B + g * coupling, qubit-major ordering."""
    d = bath_op.dimension
    rows, cols, vals = [], [], []
    idx = np.arange(d, dtype=np.int64)
    # qubit energies (n + 1/2) * Delta
    rows.append(idx); cols.append(idx); vals.append(np.full(d, 0.5 * delta))
    rows.append(idx + d); cols.append(idx + d); vals.append(np.full(d, 1.5 * delta))
    for shift in (0, d):
        rows.append(bath_op.rows + shift)
        cols.append(bath_op.cols + shift)
        vals.append(bath_op.vals)
    for block, offset in ((coupling.diag0, 0), (coupling.diag1, d)):
        if block is not None:
            if block.dimension != d:
                raise ValueError("coupling block dimension mismatch")
            rows.append(block.rows + offset)
            cols.append(block.cols + offset)
            vals.append(g * block.vals)
    if len(coupling.flip_vals):
        rows.append(coupling.flip_rows)
        cols.append(coupling.flip_cols + d)
        vals.append(g * coupling.flip_vals.astype(np.complex128))
    return SparseHermitianOperator(
        2 * d,
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate([np.asarray(v, dtype=np.complex128) for v in vals]),
    )


@dataclass(frozen=True)
class ReducedDensityMatrix2:
    rho11: float
    rho22: float
    rho12: complex

    @property
    def rho21(self) -> complex:
        return np.conj(self.rho12)

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=np.complex128
        )

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix())

    @property
    def trace(self) -> float:
        return self.rho11 + self.rho22


def partial_trace_qubit(psi: np.ndarray, tol: float = 1e-8) -> ReducedDensityMatrix2:
    """Trace out the bath of a composite pure state (qubit-major layout)."""
    if len(psi) % 2:
        raise ValueError("composite vector length must be even")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state not normalized: |norm-1| = {abs(norm - 1.0):.2e}")
    d = len(psi) // 2
    a, b = psi[:d], psi[d:]
    return ReducedDensityMatrix2(
        rho11=float(np.vdot(a, a).real),
        rho22=float(np.vdot(b, b).real),
        rho12=complex(np.vdot(b, a)),  # <0|rho|1> = sum_k psi_0k psi_1k*
    )


def _tridiag_expm_column(alphas, betas_inner, dt):
    """First column of exp(-i dt T) for the Lanczos tridiagonal T."""
    w, u = scipy.linalg.eigh_tridiagonal(alphas, betas_inner)
    return u @ (np.exp(-1j * dt * w) * u[0].conj())


def lanczos_expm(
    op: SparseHermitianOperator,
    v: np.ndarray,
    dt: float,
    tol: float = 1e-10,
    m_max: int = 40,
    shift: float = 0.0,
):
    """exp(-i dt (H - shift)) v by a Lanczos subspace exponential.

    Returns (result, error_estimate, m_used). The subspace grows until the
    standard a-posteriori estimate beta_{m+1}*dt*|coeff_m| falls below tol
    or m_max is hit; the caller decides whether to shrink the step.
    """
    n = len(v)
    m_max = min(m_max, n)
    basis = np.empty((m_max + 1, n), dtype=np.complex128)
    alphas = np.empty(m_max)
    betas = np.empty(m_max + 1)
    basis[0] = v
    betas[0] = 0.0
    coeff = np.array([1.0 + 0.0j])
    err = float("inf")
    m = 0
    for j in range(m_max):
        w = op.matvec(basis[j])
        if shift != 0.0:
            w = w - shift * basis[j]
        if j > 0:
            w -= betas[j] * basis[j - 1]
        alphas[j] = np.vdot(basis[j], w).real
        w -= alphas[j] * basis[j]
        # full reorthogonalization: the subspace stays tiny, so this is cheap
        overlaps = basis[: j + 1].conj() @ w
        w -= basis[: j + 1].T @ overlaps
        betas[j + 1] = np.linalg.norm(w)
        m = j + 1
        happy = betas[m] < 1e-13
        if happy or m == m_max or (m >= 4 and m % 2 == 0):
            coeff = _tridiag_expm_column(alphas[:m], betas[1:m], dt)
            err = 0.0 if happy else abs(betas[m] * dt * coeff[-1])
            if err <= tol or happy:
                break
        if not happy:
            basis[m] = w / betas[m]
    result = basis[:m].T @ coeff
    return result, err, m


def iter_propagate_krylov(
    op: SparseHermitianOperator,
    psi0: np.ndarray,
    t_grid: np.ndarray,
    tol: float = 1e-10,
    m_max: int = 40,
):
    """Yield (t, psi(t)) at each grid point using adaptive Lanczos steps."""
    shift = float(op.diagonal().mean())
    psi = np.asarray(psi0, dtype=np.complex128).copy()
    t0 = float(t_grid[0])
    t = t0
    yield t, psi.copy()
    dt_sub = None
    for t_next in t_grid[1:]:
        span = float(t_next) - t
        if dt_sub is None:
            dt_sub = span
        remaining = span
        while remaining > 1e-12:
            step = min(dt_sub, remaining)
            result, err, m = lanczos_expm(op, psi, step, tol=tol, m_max=m_max, shift=shift)
            if err > tol:
                if step <= 1e-9:
                    raise RuntimeError(
                        f"Krylov step failed to converge even at step {step:.2e}"
                    )
                dt_sub = step / 2.0
                continue
            psi = result
            remaining -= step
            if err < tol / 1000.0:
                dt_sub = min(dt_sub * 1.4, span)
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1.0) > 1e-8:
            raise RuntimeError(f"Krylov propagation lost normalization: {nrm}")
        psi = psi / nrm
        t = float(t_next)
        yield t, psi * np.exp(-1j * shift * (t - t0))


def iter_propagate_spectral(
    eig_or_op,
    psi0: np.ndarray,
    t_grid: np.ndarray,
    dense_budget: int = 20000,
):
    """Yield (t, psi(t)) from the full eigendecomposition (exact reference)."""
    if isinstance(eig_or_op, Eigensystem):
        eig = eig_or_op
    else:
        eig = diagonalize(eig_or_op, dense_budget=dense_budget, validate=False)
    amp = eig.vectors.T.conj() @ np.asarray(psi0, dtype=np.complex128)
    t0 = float(t_grid[0])
    for t in t_grid:
        phases = np.exp(-1j * eig.energies * (float(t) - t0))
        yield float(t), eig.vectors @ (amp * phases)


def propagate(
    op: SparseHermitianOperator,
    psi0: np.ndarray,
    t_grid: np.ndarray,
    method: str = "spectral",
    tol: float = 1e-10,
    dense_budget: int = 20000,
) -> np.ndarray:
    """Propagated states at the grid points, shape (T, dim)."""
    norm = abs(np.linalg.norm(psi0) - 1.0)
    if norm > 1e-10:
        raise ValueError(f"initial state not normalized: {norm:.2e}")
    if method == "spectral":
        it = iter_propagate_spectral(op, psi0, t_grid, dense_budget=dense_budget)
    elif method == "krylov":
        it = iter_propagate_krylov(op, psi0, t_grid, tol=tol)
    else:
        raise ValueError("method must be 'spectral' or 'krylov'")
    return np.array([psi for _, psi in it])


QUBIT_INITIAL_STATES = {
    "ground": np.array([1.0, 0.0]),
    "plus": np.array([1.0, 1.0]) / math.sqrt(2.0),
}


@dataclass
class ExperimentRecord:
    times: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    rho12: np.ndarray
    e_bath: np.ndarray
    e_total: np.ndarray
    ratio_longtime: float
    ratio_std: float
    initial_state: str
    e_target: float
    bath_index: int

    def summary(self) -> dict:
        return {
            "initial_state": self.initial_state,
            "e_target": self.e_target,
            "initial_fock_index": int(self.bath_index),
            "ratio_longtime": self.ratio_longtime,
            "ratio_std": self.ratio_std,
            "energy_drift_relative": float(
                np.max(np.abs(self.e_total - self.e_total[0]))
                / max(abs(self.e_total[0]), 1e-30)
            ),
            "bath_energy_drift": float(np.max(np.abs(self.e_bath - self.e_bath[0]))),
        }


def run_experiment(
    bath_op: SparseHermitianOperator,
    coupling: CouplingBlocks,
    g: float,
    delta: float,
    initial_state: str,
    bath_index: int,
    t_grid: np.ndarray,
    method: str = "spectral",
    composite_eig: Eigensystem | None = None,
    krylov_tol: float = 1e-10,
    dense_budget: int = 20000,
    e_target: float = float("nan"),
) -> ExperimentRecord:
    """Propagate qubit (x) Fock state and record the reduced qubit dynamics.

    The long-time ratio is the mean of rho11/rho22 over the final third of
    the grid, with its standard deviation as the fluctuation band.
    """
    d = bath_op.dimension
    try:
        q = QUBIT_INITIAL_STATES[initial_state]
    except KeyError:
        raise ValueError(
            f"unknown initial state {initial_state!r}; options: {sorted(QUBIT_INITIAL_STATES)}"
        ) from None
    psi0 = np.zeros(2 * d, dtype=np.complex128)
    psi0[bath_index] = q[0]
    psi0[d + bath_index] = q[1]

    h = build_composite_hamiltonian(delta, bath_op, g, coupling)
    t_grid = np.asarray(t_grid, dtype=float)
    if method == "spectral":
        eig = composite_eig or diagonalize(h, dense_budget=dense_budget, validate=False)
        it = iter_propagate_spectral(eig, psi0, t_grid)
    elif method == "krylov":
        it = iter_propagate_krylov(h, psi0, t_grid, tol=krylov_tol)
    else:
        raise ValueError("method must be 'spectral' or 'krylov'")

    n_t = len(t_grid)
    rho11 = np.empty(n_t)
    rho22 = np.empty(n_t)
    rho12 = np.empty(n_t, dtype=np.complex128)
    e_bath = np.empty(n_t)
    e_total = np.empty(n_t)
    for i, (_, psi) in enumerate(it):
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1.0) > 1e-8:
            raise RuntimeError(f"norm drifted to {nrm}")
        rho = partial_trace_qubit(psi, tol=1e-6)
        rho11[i] = rho.rho11
        rho22[i] = rho.rho22
        rho12[i] = rho.rho12
        e_bath[i] = bath_op.expectation(psi[:d]) + bath_op.expectation(psi[d:])
        e_total[i] = h.expectation(psi)

    third = max(1, n_t // 3)
    ratios = rho11[-third:] / np.maximum(rho22[-third:], 1e-300)
    return ExperimentRecord(
        times=t_grid,
        rho11=rho11,
        rho22=rho22,
        rho12=rho12,
        e_bath=e_bath,
        e_total=e_total,
        ratio_longtime=float(ratios.mean()),
        ratio_std=float(ratios.std()),
        initial_state=initial_state,
        e_target=e_target,
        bath_index=bath_index,
    )
