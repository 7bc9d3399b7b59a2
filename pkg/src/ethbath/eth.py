"""ETH diagnostics: observable matrix elements in the bath eigenbasis.

Quantifies how thermal the bath's eigenstates look for a local observable:
smoothness of the diagonal, magnitude of the off-diagonal fluctuations,
the spectral envelope of those fluctuations, the bath correlation
function, and the decomposition of expectation-value dynamics into a
relaxed value plus residual fluctuations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bath import DensityOfStates, Eigensystem
from .fock import SparseHermitianOperator
from .thermo import MicrocanonicalWindow


@dataclass
class ObservableEigenbasis:
    """Matrix O_kl of an observable between bath eigenstates."""

    matrix: np.ndarray
    energies: np.ndarray
    label: str = ""

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def diag(self) -> np.ndarray:
        return np.real(np.diagonal(self.matrix))


@dataclass
class DiagonalProfile:
    energies: np.ndarray
    diag: np.ndarray
    smooth: np.ndarray
    residual: np.ndarray
    window_width: float

    def local_variance(self, n_windows: int = 20):
        """Variance of the diagonal residuals over equal-count energy windows."""
        d = len(self.energies)
        w = max(1, d // n_windows)
        centers, variances = [], []
        for k in range(0, d - w + 1, w):
            centers.append(self.energies[k : k + w].mean())
            variances.append(self.residual[k : k + w].var())
        return np.array(centers), np.array(variances)


@dataclass
class OffDiagonalSlice:
    k0: int
    energies: np.ndarray       # E_k for k != k0
    magnitudes: np.ndarray     # |R_{k k0}|^2
    e_k0: float


@dataclass
class SpectralFunctionEstimate:
    """Binned envelope of 2*pi*rho(E_mean)*|R_kl|^2 against omega = E_k - E_l."""

    omega: np.ndarray
    values: np.ndarray        # NaN where a bin is empty
    counts: np.ndarray
    bin_width: float

    def value_at(self, omega: float) -> float:
        """Linear interpolation between populated bin centers."""
        good = ~np.isnan(self.values)
        if good.sum() < 2:
            raise ValueError("not enough populated bins to interpolate")
        return float(np.interp(omega, self.omega[good], self.values[good]))

    @property
    def s_zero(self) -> float:
        """Extrapolation to omega=0 from the two smallest-|omega| populated bins."""
        good = np.nonzero(~np.isnan(self.values))[0]
        order = good[np.argsort(np.abs(self.omega[good]))]
        pair = order[:2]
        x0, x1 = np.abs(self.omega[pair])
        y0, y1 = self.values[pair]
        if abs(x1 - x0) < 1e-6 * self.bin_width:
            return float(0.5 * (y0 + y1))
        return float(y0 - x0 * (y1 - y0) / (x1 - x0))


def transform_observable(
    op: SparseHermitianOperator, eig: Eigensystem, label: str = ""
) -> ObservableEigenbasis:
    """O_kl = V† O V. The hot congruence transform; delegates to BLAS."""
    if op.dimension != eig.dimension:
        raise ValueError("operator and eigensystem dimensions differ")
    ov = op.to_csr() @ eig.vectors
    matrix = eig.vectors.T.conj() @ ov
    herm_err = np.abs(matrix - matrix.T.conj()).max()
    if herm_err > 1e-10 * max(np.abs(matrix).max(), 1.0):
        raise AssertionError(f"transform lost Hermiticity: {herm_err:.2e}")
    matrix = 0.5 * (matrix + matrix.T.conj())
    return ObservableEigenbasis(matrix=matrix, energies=eig.energies, label=label)


def _sliding_window_mean(
    energies: np.ndarray, diag: np.ndarray, width: float, min_states: int
) -> np.ndarray:
    """Mean of diag over |E_j - E_k| <= width/2, at least min_states nearest states."""
    d = len(energies)
    smooth = np.empty(d)
    half = width / 2.0
    lo = np.searchsorted(energies, energies - half, side="left")
    hi = np.searchsorted(energies, energies + half, side="right")
    cum = np.concatenate([[0.0], np.cumsum(diag)])
    for k in range(d):
        a, b = lo[k], hi[k]
        if b - a < min_states:
            a = max(0, k - min_states // 2)
            b = min(d, a + min_states)
            a = max(0, b - min_states)
        smooth[k] = (cum[b] - cum[a]) / (b - a)
    return smooth


def split_smooth_fluctuation(
    obs: ObservableEigenbasis,
    window_width: float = 0.5,
    min_states: int = 31,
):
    """Split O_kl into the smooth diagonal profile and the fluctuation matrix.

    The smooth part is the sliding-window mean of the diagonal; the
    fluctuation matrix R carries the diagonal residual and all off-diagonal
    elements, so smooth*delta_kl + R reproduces O exactly.
    """
    energies = obs.energies
    spacing = np.diff(energies).mean()
    if window_width < spacing:
        raise ValueError(
            f"window width {window_width} is below the mean level spacing {spacing:.3g}"
        )
    diag = obs.diag
    smooth = _sliding_window_mean(energies, diag, window_width, min_states)
    residual = diag - smooth
    profile = DiagonalProfile(
        energies=energies,
        diag=diag,
        smooth=smooth,
        residual=residual,
        window_width=window_width,
    )
    r = obs.matrix.copy()
    np.fill_diagonal(r, residual)
    return profile, r


def offdiagonal_slice(obs: ObservableEigenbasis, k0: int) -> OffDiagonalSlice:
    if not 0 <= k0 < obs.dimension:
        raise ValueError("k0 out of range")
    col = obs.matrix[:, k0]
    keep = np.arange(obs.dimension) != k0
    return OffDiagonalSlice(
        k0=k0,
        energies=obs.energies[keep],
        magnitudes=np.abs(col[keep]) ** 2,
        e_k0=obs.energies[k0],
    )


def estimate_spectral_function(
    fluctuations: np.ndarray,
    eig: Eigensystem,
    dos: DensityOfStates,
    window: MicrocanonicalWindow,
    n_bins: int = 60,
    omega_max: float = 6.0,
) -> SpectralFunctionEstimate:
    """Envelope of the fluctuation matrix elements.

    For row states k inside the microcanonical window and all column states
    l, each pair contributes 2*pi*rho(E_mean)*|R_kl|^2 at omega = E_k - E_l;
    bins report the mean contribution, empty bins are NaN.
    """
    if window.count == 0:
        raise ValueError("empty microcanonical window")
    e = eig.energies
    rows = window.members
    r2 = np.abs(fluctuations[rows, :]) ** 2
    omega = e[rows][:, None] - e[None, :]
    e_mean = 0.5 * (e[rows][:, None] + e[None, :])
    # k = l pairs are not fluctuations; keep them out of the omega ~ 0 bin
    self_pair = np.zeros_like(r2, dtype=bool)
    self_pair[np.arange(len(rows)), rows] = True
    # the smooth DOS is cheap to tabulate once and interpolate per pair
    grid = np.linspace(e.min(), e.max(), 2048)
    rho = np.interp(e_mean.ravel(), grid, dos(grid))
    weights = 2.0 * np.pi * rho * r2.ravel()
    edges = np.linspace(-omega_max, omega_max, n_bins + 1)
    idx = np.digitize(omega.ravel(), edges) - 1
    ok = (idx >= 0) & (idx < n_bins) & ~self_pair.ravel()
    sums = np.zeros(n_bins)
    counts = np.zeros(n_bins)
    np.add.at(sums, idx[ok], weights[ok])
    np.add.at(counts, idx[ok], 1.0)
    values = np.divide(sums, counts, out=np.full(n_bins, np.nan), where=counts > 0)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return SpectralFunctionEstimate(
        omega=centers,
        values=values,
        counts=counts,
        bin_width=edges[1] - edges[0],
    )


def golden_rule_kernel(
    obs: ObservableEigenbasis,
    window: MicrocanonicalWindow,
    omega: float,
    half_width: float = 0.1,
) -> float:
    """Transition-weight density (1/N) sum_k' sum_l |O_kl|^2 delta(E_l - E_k - omega).

    The delta function is binned with the given half width. This is the
    frequency-resolved quantity whose values at +/-Delta set the
    dissipative rates.
    """
    e = obs.energies
    rows = window.members
    diff = e[None, :] - e[rows][:, None]
    mask = np.abs(diff - omega) <= half_width
    r2 = np.abs(obs.matrix[rows, :]) ** 2
    return float(r2[mask].sum() / window.count / (2.0 * half_width))


def correlation_function(
    obs: ObservableEigenbasis,
    window: MicrocanonicalWindow,
    t_grid: np.ndarray,
    chunk: int = 200,
) -> np.ndarray:
    """Microcanonical two-time correlation C(t) of the observable.

    C(t) = (1/N) sum_{k in window} sum_l e^{i (E_k - E_l) t} |O_kl|^2.
    """
    if window.count == 0:
        raise ValueError("empty microcanonical window")
    e = obs.energies
    rows = window.members
    w2 = np.abs(obs.matrix[rows, :]) ** 2
    omega = (e[rows][:, None] - e[None, :]).ravel()
    weights = w2.ravel() / window.count
    t_grid = np.asarray(t_grid, dtype=float)
    out = np.empty(len(t_grid), dtype=np.complex128)
    for start in range(0, len(t_grid), chunk):
        ts = t_grid[start : start + chunk]
        out[start : start + len(ts)] = weights @ np.exp(1j * np.outer(omega, ts))
    return out


def expectation_timeseries(
    obs: ObservableEigenbasis,
    fluctuations: np.ndarray,
    alpha: np.ndarray,
    t_grid: np.ndarray,
):
    """Expectation value of the observable in a superposition of eigenstates.

    Returns (series, long_time_average, fluctuation_sum): the time series
    <phi(t)|O|phi(t)>, its diagonal-ensemble average, and the residual
    fluctuation magnitude sum_kl |alpha_k|^2 |alpha_l|^2 |R_kl|^2.
    """
    alpha = np.asarray(alpha, dtype=np.complex128)
    norm = np.abs(np.vdot(alpha, alpha) - 1.0)
    if norm > 1e-10:
        raise ValueError(f"initial coefficients not normalized: |<a|a>-1|={norm:.2e}")
    e = obs.energies
    t_grid = np.asarray(t_grid, dtype=float)
    c = alpha[:, None] * np.exp(-1j * np.outer(e, t_grid))
    oc = obs.matrix @ c
    series = np.real(np.sum(np.conj(c) * oc, axis=0))
    p = np.abs(alpha) ** 2
    long_time_average = float(p @ obs.diag)
    fluctuation = float(p @ (np.abs(fluctuations) ** 2) @ p)
    return series, long_time_average, fluctuation
