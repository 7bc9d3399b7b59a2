"""Microcanonical thermodynamics of the bath spectrum.

The ensemble on an energy window is the uniform mixture over its member
eigenstates; its entropy is ln(count) and the inverse temperature is the
energy derivative of the entropy curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import savgol_filter


@dataclass(frozen=True)
class MicrocanonicalWindow:
    e_center: float
    half_width: float
    members: np.ndarray  # indices of eigenstates inside the window

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TemperatureCurve:
    energies: np.ndarray
    counts: np.ndarray
    entropy: np.ndarray  # NaN where the window is empty
    beta: np.ndarray     # NaN where masked

    def beta_at(self, e: float) -> float:
        good = ~np.isnan(self.beta)
        if good.sum() < 2:
            raise ValueError("temperature curve has too few valid points")
        return float(np.interp(e, self.energies[good], self.beta[good]))


def build_window(energies: np.ndarray, e_center: float, half_width: float) -> MicrocanonicalWindow:
    if half_width <= 0:
        raise ValueError("window half-width must be positive")
    members = np.nonzero(np.abs(energies - e_center) <= half_width)[0]
    if len(members) == 0:
        raise ValueError(
            f"no eigenstates within {half_width} of E={e_center} "
            f"(spectrum spans [{energies.min():.4g}, {energies.max():.4g}])"
        )
    return MicrocanonicalWindow(e_center=e_center, half_width=half_width, members=members)


def entropy(window: MicrocanonicalWindow) -> float:
    """S = ln(count), the von Neumann entropy of the uniform window mixture."""
    return float(np.log(window.count))


def beta_curve(
    energies: np.ndarray,
    half_width: float = 0.5,
    e_grid: np.ndarray | None = None,
    n_grid: int = 200,
    smooth_points: int = 7,
) -> TemperatureCurve:
    """Entropy and inverse temperature on an energy grid.

    ln(count) is a staircase in E, so the derivative is taken after a local
    quadratic (Savitzky-Golay) fit. Empty-window grid points are masked,
    never interpolated.
    """
    energies = np.sort(np.asarray(energies, dtype=float))
    if e_grid is None:
        # central 90% of the spectrum; the sparse tails are masked anyway
        span = energies[-1] - energies[0]
        e_grid = np.linspace(
            energies[0] + 0.05 * span, energies[-1] - 0.05 * span, n_grid
        )
    e_grid = np.asarray(e_grid, dtype=float)
    lo = np.searchsorted(energies, e_grid - half_width, side="left")
    hi = np.searchsorted(energies, e_grid + half_width, side="right")
    counts = (hi - lo).astype(float)
    s = np.where(counts > 0, np.log(np.maximum(counts, 1.0)), np.nan)
    good = ~np.isnan(s)
    beta = np.full_like(s, np.nan)
    if good.sum() >= smooth_points:
        idx = np.nonzero(good)[0]
        s_smooth = savgol_filter(s[idx], smooth_points, 2)
        beta[idx] = np.gradient(s_smooth, e_grid[idx])
    return TemperatureCurve(energies=e_grid, counts=counts, entropy=s, beta=beta)


def microcanonical_average(window: MicrocanonicalWindow, obs_matrix: np.ndarray) -> float:
    """Window-uniform average of the observable's eigenbasis diagonal.

    Accepts either the full eigenbasis matrix or just its diagonal. Equals
    Tr(P O P)/count for the window projector P, so it is invariant under
    re-orthonormalization of degenerate eigenvectors.
    """
    obs_matrix = np.asarray(obs_matrix)
    if obs_matrix.ndim == 2:
        diag = np.real(np.diagonal(obs_matrix))
    else:
        diag = np.real(obs_matrix)
    if window.members.max() >= len(diag):
        raise ValueError("window members exceed observable dimension")
    return float(diag[window.members].mean())
