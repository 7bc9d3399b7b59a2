"""1D single-particle problem: double-well and qubit traps, localized
orbitals, and all Hamiltonian coefficients by quadrature.

Lengths are in units of the harmonic oscillator length of the well,
energies in units of the trap quantum. The barrier is a focused-laser
Gaussian; "intensity" width convention means the potential is
height*exp(-2 x^2 / sigma^2) (beam-waist sigma), while "stddev" means
height*exp(-x^2 / (2 sigma^2)). The intensity reading reproduces the
known tunneling and on-site energies of this trap far better and is the
default.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eigh_tridiagonal


@dataclass(frozen=True)
class Grid1D:
    x_min: float = -8.0
    x_max: float = 8.0
    n_points: int = 2001

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("n_points must be >= 3")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True)
class PotentialSpec:
    """Harmonic trap split by a narrow Gaussian barrier."""

    harmonic_prefactor: float = 0.5
    barrier_height: float = 10.0
    barrier_width: float = 0.1
    width_convention: str = "intensity"  # or "stddev"

    def __post_init__(self):
        if self.barrier_height < 0:
            raise ValueError("barrier height must be >= 0")
        if self.barrier_width <= 0:
            raise ValueError("barrier width must be positive")
        if self.width_convention not in ("intensity", "stddev"):
            raise ValueError("width_convention must be 'intensity' or 'stddev'")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.width_convention == "intensity":
            exponent = -2.0 * x**2 / self.barrier_width**2
        else:
            exponent = -(x**2) / (2.0 * self.barrier_width**2)
        return self.harmonic_prefactor * x**2 + self.barrier_height * np.exp(exponent)


PAPER_POTENTIAL = PotentialSpec()

#: Published coefficient values for the default trap at g_B = 0.3.
REFERENCE_COEFFICIENTS = {
    "J0": 0.26,
    "J1": 0.34,
    "U0": 0.14,
    "U1": 0.10,
    "U01": 0.06,
    "E0": 1.25,
    "E1": 3.17,
}


@dataclass(frozen=True)
class OrbitalSet:
    """Localized bath orbitals and the two qubit orbitals on a common grid."""

    grid: Grid1D
    bath: np.ndarray   # (4, n_points), mode order (L,0),(R,0),(L,1),(R,1)
    qubit: np.ndarray  # (2, n_points)

    def __post_init__(self):
        h = self.grid.h
        for orb in list(self.bath) + list(self.qubit):
            norm = simpson(np.abs(orb) ** 2, dx=h)
            if abs(norm - 1.0) > 1e-8:
                raise ValueError(f"orbital not normalized: |norm-1|={abs(norm-1.0):.2e}")


@dataclass(frozen=True)
class CoefficientSet:
    j0: float
    j1: float
    u0: float
    u1: float
    u01: float
    e0: float
    e1: float
    c_tensor: np.ndarray = field(repr=False)  # (2, 2, 4, 4): [n, n', mode, mode']

    def as_dict(self) -> dict:
        return {
            "J0": self.j0,
            "J1": self.j1,
            "U0": self.u0,
            "U1": self.u1,
            "U01": self.u01,
            "E0": self.e0,
            "E1": self.e1,
            "C": self.c_tensor.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoefficientSet":
        return cls(
            j0=d["J0"], j1=d["J1"], u0=d["U0"], u1=d["U1"], u01=d["U01"],
            e0=d["E0"], e1=d["E1"], c_tensor=np.asarray(d["C"], dtype=float),
        )


def _apply_hamiltonian(orbital: np.ndarray, v: np.ndarray, h: float, mass: float = 1.0) -> np.ndarray:
    """Kinetic + potential action with the same 3-point stencil as the solver."""
    out = np.empty_like(orbital)
    k = -0.5 / (mass * h * h)
    out[1:-1] = k * (orbital[2:] - 2.0 * orbital[1:-1] + orbital[:-2])
    out[0] = k * (orbital[1] - 2.0 * orbital[0])
    out[-1] = k * (orbital[-2] - 2.0 * orbital[-1])
    return out + v * orbital


def solve_eigenstates(grid: Grid1D, potential, n_states: int, mass: float = 1.0):
    """Lowest eigenpairs of the finite-difference Hamiltonian with Dirichlet walls.

    Returns (energies, orbitals) with orbitals L2-normalized on the grid,
    shape (n_states, n_points).
    """
    if n_states > grid.n_points - 2:
        raise ValueError("n_states exceeds what the grid can resolve")
    x = grid.x
    h = grid.h
    v = potential(x) if callable(potential) else np.asarray(potential, dtype=float)
    kin = 1.0 / (mass * h * h)
    d = kin + v
    e = np.full(grid.n_points - 1, -0.5 * kin)
    energies, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, n_states - 1))
    orbitals = (vecs / math.sqrt(h)).T
    # deterministic sign: positive lobe at the leftmost significant point
    for orb in orbitals:
        idx = np.nonzero(np.abs(orb) > 1e-6 * np.abs(orb).max())[0][0]
        if orb[idx] < 0:
            orb *= -1.0
    return energies, orbitals


def grid_convergence_check(grid: Grid1D, potential, n_states: int, tol: float = 1e-3) -> bool:
    """Compare against a grid with doubled spacing; warn when not converged."""
    energies, _ = solve_eigenstates(grid, potential, n_states)
    coarse = Grid1D(grid.x_min, grid.x_max, (grid.n_points - 1) // 2 + 1)
    energies_c, _ = solve_eigenstates(coarse, potential, n_states)
    drift = np.max(np.abs(energies - energies_c) / np.maximum(np.abs(energies), 1e-12))
    if drift > tol:
        warnings.warn(
            f"grid may be too coarse: halving h moves energies by {drift:.2e}",
            stacklevel=2,
        )
        return False
    return True


def localize(grid: Grid1D, doublet_orbitals: np.ndarray, band_gap: float | None = None,
             doublet_splitting: float | None = None):
    """Rotate a symmetric/antisymmetric doublet into left/right orbitals.

    Returns (phi_L, phi_R) with phi_L peaked at x < 0, both normalized.
    Warns when the doublet splitting is not small against the gap to the
    next band (the rotation then mixes bands).
    """
    a, b = doublet_orbitals
    h = grid.h
    # identify the symmetric member via the parity overlap
    parity_a = simpson(a * a[::-1], dx=h)
    sym, asym = (a, b) if parity_a > 0 else (b, a)
    if band_gap is not None and doublet_splitting is not None:
        if doublet_splitting > 0.8 * band_gap:
            warnings.warn(
                f"doublet splitting {doublet_splitting:.3f} is not small against "
                f"the band gap {band_gap:.3f}",
                stacklevel=2,
            )
    left = (sym - asym) / math.sqrt(2.0)
    right = (sym + asym) / math.sqrt(2.0)
    if grid.x[np.argmax(left**2)] > 0:
        left, right = right, left
    if left[np.argmax(left**2)] < 0:
        left = -left
    if right[np.argmax(right**2)] < 0:
        right = -right
    return left, right


def qubit_orbitals(grid: Grid1D, omega: float = 1.0, mass_times_omega: float = 1.0):
    """Two lowest orbitals of the qubit trap, analytic Hermite-Gaussians.

    The trap satisfies hbar*omega = Delta; mass_times_omega fixes the
    oscillator length (default: equal to the bath's, so overlaps are O(1)).
    """
    x = grid.x
    ell = 1.0 / math.sqrt(mass_times_omega)
    xi = x / ell
    g0 = np.exp(-(xi**2) / 2.0) / (math.pi ** 0.25 * math.sqrt(ell))
    g1 = math.sqrt(2.0) * xi * g0
    energies = np.array([0.5 * omega, 1.5 * omega])
    return energies, np.array([g0, g1])


def solve_double_well(grid: Grid1D, potential: PotentialSpec):
    """Solve the two lowest bands of the double well and localize them.

    Returns (band_energies, j_couplings, orbitals) where orbitals is the
    (4, n) array in mode order and band_energies/j_couplings are per band.
    """
    energies, orbitals = solve_eigenstates(grid, potential, 4)
    gap = energies[2] - energies[1]
    l0, r0 = localize(grid, orbitals[0:2], band_gap=gap,
                      doublet_splitting=energies[1] - energies[0])
    l1, r1 = localize(grid, orbitals[2:4], band_gap=gap,
                      doublet_splitting=energies[3] - energies[2])
    band_energies = np.array(
        [(energies[0] + energies[1]) / 2.0, (energies[2] + energies[3]) / 2.0]
    )
    j_couplings = np.array(
        [(energies[1] - energies[0]) / 2.0, (energies[3] - energies[2]) / 2.0]
    )
    return band_energies, j_couplings, np.array([l0, r0, l1, r1])


def compute_coefficients(
    grid: Grid1D,
    potential: PotentialSpec,
    g_b: float,
    qubit_omega: float = 1.0,
    qubit_mass_times_omega: float = 1.0,
) -> tuple[CoefficientSet, OrbitalSet]:
    """All bath coefficients and the qubit-bath overlap tensor by Simpson quadrature."""
    x = grid.x
    h = grid.h
    v = potential(x)
    _, _, bath = solve_double_well(grid, potential)
    l0, r0, l1, r1 = bath
    _, qubit = qubit_orbitals(grid, qubit_omega, qubit_mass_times_omega)

    def integral(y):
        return float(simpson(y, dx=h))

    # mirror symmetry check: on-site energies must agree between wells
    e_left = [integral(l0 * _apply_hamiltonian(l0, v, h)), integral(l1 * _apply_hamiltonian(l1, v, h))]
    e_right = [integral(r0 * _apply_hamiltonian(r0, v, h)), integral(r1 * _apply_hamiltonian(r1, v, h))]
    for el, er in zip(e_left, e_right):
        if abs(el - er) > 1e-10:
            raise AssertionError(f"mirror symmetry broken: E_L={el!r} E_R={er!r}")

    j0 = abs(integral(l0 * _apply_hamiltonian(r0, v, h)))
    j1 = abs(integral(l1 * _apply_hamiltonian(r1, v, h)))
    u0 = g_b * integral(l0**4)
    u1 = g_b * integral(l1**4)
    u01 = g_b * integral(l0**2 * l1**2)

    c = np.empty((2, 2, 4, 4))
    for n in range(2):
        for m in range(2):
            qq = qubit[n] * qubit[m]
            for a in range(4):
                for b in range(4):
                    c[n, m, a, b] = integral(qq * bath[a] * bath[b])

    coeffs = CoefficientSet(
        j0=j0, j1=j1, u0=u0, u1=u1, u01=u01, e0=e_left[0], e1=e_left[1], c_tensor=c
    )
    orbitals = OrbitalSet(grid=grid, bath=bath, qubit=qubit)
    return coeffs, orbitals
