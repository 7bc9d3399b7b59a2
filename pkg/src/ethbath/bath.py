"""Assembly and exact diagonalization of the two-band double-well bath.

The Hamiltonian couples four modes (L,0),(R,0),(L,1),(R,1): intra-band
hopping -J^l, on-site repulsion U^l n(n-1) exactly as printed (no 1/2),
single-particle energies E^l n, and the inter-band terms 2 U01 n^0 n^1 and
pair transfer U01 (b0† b0† b1 b1 + h.c.) on each site.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .fock import (
    FockBasis,
    FockState,
    SparseHermitianOperator,
    build_density_terms,
    build_hopping,
)

EIGENSYSTEM_FORMAT = "ethbath-eigensystem v1"


@dataclass(frozen=True)
class BathParameters:
    j0: float
    j1: float
    u0: float
    u1: float
    u01: float
    e0: float
    e1: float
    n_particles: int

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        for name in ("j0", "j1", "u0", "u1", "u01", "e0", "e1"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def reference(cls, n_particles: int) -> "BathParameters":
        """The published coefficient set for the default trap."""
        return cls(
            j0=0.26, j1=0.34, u0=0.14, u1=0.10, u01=0.06, e0=1.25, e1=3.17,
            n_particles=n_particles,
        )

    def as_dict(self) -> dict:
        return {
            "J0": self.j0, "J1": self.j1, "U0": self.u0, "U1": self.u1,
            "U01": self.u01, "E0": self.e0, "E1": self.e1, "N": self.n_particles,
        }


def build_bath_hamiltonian(params: BathParameters, basis: FockBasis) -> SparseHermitianOperator:
    if basis.n_modes != 4:
        raise ValueError("the bath Hamiltonian is defined for 4 modes")
    terms = [
        build_hopping(basis, 0, 1, -params.j0),
        build_hopping(basis, 2, 3, -params.j1),
    ]
    # on-site U^l n(n-1) and single-particle energies
    for mode, (u, e) in enumerate(
        [(params.u0, params.e0), (params.u0, params.e0), (params.u1, params.e1), (params.u1, params.e1)]
    ):
        terms.append(build_density_terms(basis, "onsite", mode, coeff=u))
        terms.append(build_density_terms(basis, "occupation", mode, coeff=e))
    # inter-band terms on each site: (L: modes 0,2), (R: modes 1,3);
    # pair_transfer carries its h.c. internally, so one term per site
    for lo, hi in ((0, 2), (1, 3)):
        terms.append(build_density_terms(basis, "density_density", lo, hi, coeff=2.0 * params.u01))
        terms.append(build_density_terms(basis, "pair_transfer", lo, hi, coeff=params.u01))
    h = terms[0]
    for t in terms[1:]:
        h = h + t
    return h


@dataclass
class Eigensystem:
    """Sorted full spectrum with orthonormal eigenvectors as columns."""

    energies: np.ndarray
    vectors: np.ndarray
    residual: float = field(default=float("nan"))

    @property
    def dimension(self) -> int:
        return len(self.energies)

    def validate(self, op: SparseHermitianOperator | None = None):
        overlap = self.vectors.T.conj() @ self.vectors
        ortho = np.abs(overlap - np.eye(self.dimension)).max()
        if ortho > 1e-10:
            raise AssertionError(f"eigenvectors not orthonormal: {ortho:.2e}")
        if op is not None:
            hv = op.to_csr() @ self.vectors
            res = np.linalg.norm(hv - self.vectors * self.energies, axis=0).max()
            scale = max(np.abs(self.energies).max(), 1.0)
            if res > 1e-9 * scale:
                raise AssertionError(f"eigenpair residual {res:.2e} exceeds 1e-9*|H|")
            trace_err = abs(self.energies.sum() - op.diagonal().sum())
            if trace_err > 1e-8 * max(abs(op.diagonal().sum()), 1.0):
                raise AssertionError(f"trace mismatch {trace_err:.2e}")
            object.__setattr__(self, "residual", float(res))

    def save_energies(self, path, meta: str = ""):
        header = f"# {EIGENSYSTEM_FORMAT} D={self.dimension} {meta}".rstrip()
        with open(path, "w", newline="\n") as f:
            f.write(header + "\n")
            for e in self.energies:
                f.write(f"{e:.17g}\n")

    @staticmethod
    def load_energies(path) -> np.ndarray:
        with open(path) as f:
            header = f.readline()
            if EIGENSYSTEM_FORMAT not in header:
                raise ValueError(f"unrecognized eigensystem file header: {header!r}")
            return np.loadtxt(io.StringIO(f.read()))


def _fix_gauge(energies: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Deterministic eigenvector gauge: re-orthonormalize degenerate
    clusters and make the first significant component positive."""
    d = len(energies)
    scale = max(np.abs(energies).max(), 1.0)
    tol = 1e-11 * scale
    start = 0
    while start < d:
        end = start + 1
        while end < d and energies[end] - energies[end - 1] < tol:
            end += 1
        if end - start > 1:
            q, _ = np.linalg.qr(vectors[:, start:end])
            vectors[:, start:end] = q
        start = end
    magnitudes = np.abs(vectors)
    first = (magnitudes > 1e-8 * magnitudes.max(axis=0)).argmax(axis=0)
    signs = np.sign(vectors[first, np.arange(d)].real)
    signs[signs == 0] = 1.0
    vectors *= signs
    return vectors


def diagonalize(
    op: SparseHermitianOperator,
    dense_budget: int = 20000,
    validate: bool = True,
) -> Eigensystem:
    """Full dense diagonalization (the reference path for ETH diagnostics)."""
    if op.dimension > dense_budget:
        raise ValueError(
            f"dimension {op.dimension} exceeds the dense-solver budget {dense_budget}"
        )
    h = op.to_dense()
    energies, vectors = scipy.linalg.eigh(h)
    vectors = _fix_gauge(energies, np.ascontiguousarray(vectors))
    eig = Eigensystem(energies=energies, vectors=vectors)
    if validate:
        eig.validate(op)
    return eig


@dataclass(frozen=True)
class DensityOfStates:
    """Gaussian-broadened level density rho(E) = sum_k g_sigma(E - E_k)."""

    energies: np.ndarray
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("broadening width must be positive")

    def __call__(self, e) -> np.ndarray:
        e = np.asarray(e, dtype=float)
        flat = np.atleast_1d(e).ravel()
        out = np.empty(len(flat))
        norm = self.sigma * np.sqrt(2.0 * np.pi)
        step = max(1, 2**22 // max(len(self.energies), 1))
        for start in range(0, len(flat), step):
            z = (flat[start : start + step, None] - self.energies) / self.sigma
            out[start : start + step] = np.exp(-0.5 * z**2).sum(axis=1) / norm
        out = out.reshape(np.shape(e))
        return out if out.shape else float(out)

    def histogram(self, n_bins: int = 100):
        counts, edges = np.histogram(self.energies, bins=n_bins)
        return counts, edges


def mean_level_spacing(energies: np.ndarray) -> float:
    """Mean spacing over the central half of the spectrum."""
    d = len(energies)
    core = energies[d // 4 : -d // 4] if d >= 8 else energies
    return float(np.diff(core).mean())


def density_of_states(eig: Eigensystem, sigma: float | None = None) -> DensityOfStates:
    if sigma is None:
        sigma = 20.0 * mean_level_spacing(eig.energies)
    return DensityOfStates(energies=eig.energies, sigma=sigma)


def find_initial_fock_state(
    basis: FockBasis, hamiltonian: SparseHermitianOperator, e_target: float
) -> tuple[int, FockState]:
    """Fock basis state whose diagonal energy is closest to the target.

    Ties resolve to the smallest basis index (lexicographically greatest
    occupation vector).
    """
    diag = hamiltonian.diagonal()
    if not (diag.min() <= e_target <= diag.max()):
        raise ValueError(
            f"target energy {e_target} outside the reachable diagonal range "
            f"[{diag.min():.4g}, {diag.max():.4g}]"
        )
    k = int(np.argmin(np.abs(diag - e_target)))
    return k, basis.state(k)
