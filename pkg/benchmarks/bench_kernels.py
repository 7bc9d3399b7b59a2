"""Benchmark the compiled Hermitian-COO matvec against the scipy fallback.

The matvec is the inner loop of Krylov propagation, so this is the number
that decides full-scale run times. Usage:

    python benchmarks/bench_kernels.py [N_particles ...]
"""

import sys
import time

import numpy as np

from ethbath import _kernels
from ethbath.bath import BathParameters, build_bath_hamiltonian
from ethbath.dynamics import CouplingBlocks, build_composite_hamiltonian
from ethbath.fock import enumerate_basis
from ethbath.singleparticle import Grid1D, PotentialSpec, compute_coefficients


def time_matvec(op, x, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        y = op.matvec(x, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, y


def bench(n_particles, repeats=20):
    basis = enumerate_basis(4, n_particles)
    params = BathParameters(
        j0=0.26, j1=0.34, u0=0.14, u1=0.10, u01=0.06, e0=1.25, e1=3.17,
        n_particles=n_particles,
    )
    hb = build_bath_hamiltonian(params, basis)
    coeffs, _ = compute_coefficients(Grid1D(-8, 8, 1001), PotentialSpec(), g_b=0.3)
    h = build_composite_hamiltonian(
        1.0, hb, 0.2, CouplingBlocks.from_c_tensor(basis, coeffs.c_tensor)
    )
    rng = np.random.default_rng(0)
    x = rng.normal(size=h.dimension) + 1j * rng.normal(size=h.dimension)

    rows = [("operator", "dim", "nnz(upper)", "backend", "best ms", "Mnnz/s")]
    for label, op in (("bath", hb), ("composite", h)):
        y_ref = None
        for backend in ("compiled", "python"):
            if backend == "compiled" and _kernels.BACKEND != "compiled":
                continue
            t, y = time_matvec(op, x[: op.dimension], backend, repeats)
            if y_ref is None:
                y_ref = y
            else:
                err = np.abs(y - y_ref).max()
                assert err < 1e-10, f"backends disagree: {err}"
            rows.append(
                (label, str(op.dimension), str(op.nnz), backend,
                 f"{1e3 * t:.3f}", f"{op.nnz / t / 1e6:.1f}")
            )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  ".join(s.ljust(w) for s, w in zip(r, widths)))
    print()


if __name__ == "__main__":
    sizes = [int(a) for a in sys.argv[1:]] or [10, 20, 30]
    print(f"active kernel backend: {_kernels.BACKEND}\n")
    for n in sizes:
        bench(n)
