import numpy as np
import pytest

from ethbath.bath import (
    BathParameters,
    DensityOfStates,
    Eigensystem,
    build_bath_hamiltonian,
    density_of_states,
    diagonalize,
    find_initial_fock_state,
    mean_level_spacing,
)
from ethbath.fock import SparseHermitianOperator, apply_ladder, enumerate_basis, total_number_operator

PAPER = dict(j0=0.26, j1=0.34, u0=0.14, u1=0.10, u01=0.06, e0=1.25, e1=3.17)


def brute_force_bath(params, basis):
    """Independent dense constructor via scalar ladder algebra on every state."""
    d = basis.dimension
    h = np.zeros((d, d))
    for k in range(d):
        state = basis.state(k)
        n = state.occupations
        # diagonal terms
        diag = 0.0
        for mode, (u, e) in enumerate(
            [(params.u0, params.e0), (params.u0, params.e0),
             (params.u1, params.e1), (params.u1, params.e1)]
        ):
            diag += u * n[mode] * (n[mode] - 1) + e * n[mode]
        diag += 2 * params.u01 * (n[0] * n[2] + n[1] * n[3])
        h[k, k] += diag
        # hopping: -J^l (b†_L b_R + b†_R b_L) per band
        for (i, j), coupling in (((0, 1), params.j0), ((1, 0), params.j0),
                                 ((2, 3), params.j1), ((3, 2), params.j1)):
            step = apply_ladder(state, j, "annihilate")
            if step is None:
                continue
            mid, a1 = step
            up, a2 = apply_ladder(mid, i, "create")
            h[basis.index_of(up.occupations), k] += -coupling * a1 * a2
        # pair transfer on each site, both directions
        for i, j in ((0, 2), (2, 0), (1, 3), (3, 1)):
            step = apply_ladder(state, j, "annihilate")
            if step is None:
                continue
            mid, a1 = step
            step2 = apply_ladder(mid, j, "annihilate")
            if step2 is None:
                continue
            mid2, a2 = step2
            up1, a3 = apply_ladder(mid2, i, "create")
            up2, a4 = apply_ladder(up1, i, "create")
            h[basis.index_of(up2.occupations), k] += params.u01 * a1 * a2 * a3 * a4
    return h


def test_single_particle_spectrum():
    basis = enumerate_basis(4, 1)
    params = BathParameters(n_particles=1, **PAPER)
    h = build_bath_hamiltonian(params, basis)
    evals = np.linalg.eigvalsh(h.to_dense())
    expected = sorted(
        [PAPER["e0"] - PAPER["j0"], PAPER["e0"] + PAPER["j0"],
         PAPER["e1"] - PAPER["j1"], PAPER["e1"] + PAPER["j1"]]
    )
    assert np.allclose(evals, expected, atol=1e-12)


def test_band0_energy_only():
    basis = enumerate_basis(4, 2)
    params = BathParameters(j0=0, j1=0, u0=0, u1=0, u01=0, e0=1.0, e1=0.0, n_particles=2)
    h = build_bath_hamiltonian(params, basis)
    dense = h.to_dense()
    band0 = basis.occupations[:, 0] + basis.occupations[:, 1]
    assert np.allclose(np.diagonal(dense), band0.astype(float))
    assert np.abs(dense - np.diag(np.diagonal(dense))).max() == 0.0


def test_brute_force_oracle_matches_entry_for_entry():
    basis = enumerate_basis(4, 2)
    params = BathParameters(n_particles=2, **PAPER)
    sparse = build_bath_hamiltonian(params, basis).to_dense()
    oracle = brute_force_bath(params, basis)
    assert np.abs(sparse - oracle).max() < 1e-13


def test_diagonalize_examples():
    diag_op = SparseHermitianOperator(3, [0, 1, 2], [0, 1, 2], [3.0, 1.0, 2.0])
    eig = diagonalize(diag_op)
    assert np.allclose(eig.energies, [1.0, 2.0, 3.0])
    assert np.allclose(np.abs(eig.vectors), np.eye(3)[:, [1, 2, 0]])

    flip = SparseHermitianOperator(2, [0], [1], [1.0])
    eig2 = diagonalize(flip)
    assert np.allclose(eig2.energies, [-1.0, 1.0])


def test_diagonalize_budget():
    basis = enumerate_basis(4, 10)
    params = BathParameters(n_particles=10, **PAPER)
    h = build_bath_hamiltonian(params, basis)
    with pytest.raises(ValueError):
        diagonalize(h, dense_budget=100)


def test_eigensystem_invariants_n6():
    basis = enumerate_basis(4, 6)
    params = BathParameters(n_particles=6, **PAPER)
    h = build_bath_hamiltonian(params, basis)
    eig = diagonalize(h)  # validate=True checks residual/orthonormality/trace
    assert np.all(np.diff(eig.energies) >= 0)
    assert eig.dimension == basis.dimension


def test_number_conservation_large_n_matvec():
    basis = enumerate_basis(4, 12)
    params = BathParameters(n_particles=12, **PAPER)
    h = build_bath_hamiltonian(params, basis)
    n_op = total_number_operator(basis)
    rng = np.random.default_rng(11)
    v = rng.normal(size=basis.dimension) + 1j * rng.normal(size=basis.dimension)
    v /= np.linalg.norm(v)
    comm = h.matvec(n_op.matvec(v)) - n_op.matvec(h.matvec(v))
    assert np.linalg.norm(comm) < 1e-10


def test_mirror_symmetry_commutes():
    # L<->R swap: permutation on occupations (swap wells in both bands)
    basis = enumerate_basis(4, 4)
    params = BathParameters(n_particles=4, **PAPER)
    h = build_bath_hamiltonian(params, basis).to_dense()
    perm = np.zeros((basis.dimension, basis.dimension))
    for k in range(basis.dimension):
        occ = basis.occupations[k]
        swapped = (occ[1], occ[0], occ[3], occ[2])
        perm[basis.index_of(swapped), k] = 1.0
    assert np.abs(h @ perm - perm @ h).max() < 1e-12


def test_spectrum_shift_with_energy_offset():
    basis = enumerate_basis(4, 3)
    params = BathParameters(n_particles=3, **PAPER)
    h1 = build_bath_hamiltonian(params, basis)
    shifted = BathParameters(
        j0=params.j0, j1=params.j1, u0=params.u0, u1=params.u1, u01=params.u01,
        e0=params.e0 + 0.37, e1=params.e1 + 0.37, n_particles=3,
    )
    h2 = build_bath_hamiltonian(shifted, basis)
    e1 = np.linalg.eigvalsh(h1.to_dense())
    e2 = np.linalg.eigvalsh(h2.to_dense())
    assert np.abs(e2 - e1 - 3 * 0.37).max() < 1e-8


def test_density_of_states():
    single = DensityOfStates(energies=np.array([0.0]), sigma=1.0)
    assert single(0.0) == pytest.approx(1.0 / np.sqrt(2 * np.pi))
    basis = enumerate_basis(4, 5)
    params = BathParameters(n_particles=5, **PAPER)
    eig = diagonalize(build_bath_hamiltonian(params, basis))
    dos = density_of_states(eig)
    grid = np.linspace(eig.energies[0] - 8 * dos.sigma, eig.energies[-1] + 8 * dos.sigma, 20001)
    total = np.trapezoid(dos(grid), grid)
    assert total == pytest.approx(eig.dimension, rel=1e-6)
    with pytest.raises(ValueError):
        DensityOfStates(energies=eig.energies, sigma=0.0)


def test_find_initial_fock_state():
    basis = enumerate_basis(4, 2)
    params = BathParameters(n_particles=2, **PAPER)
    h = build_bath_hamiltonian(params, basis)
    diag = h.diagonal()
    k, state = find_initial_fock_state(basis, h, diag.min())
    assert diag[k] == diag.min()
    # exhaustive oracle over all 10 states
    for target in np.linspace(diag.min(), diag.max(), 7):
        k, state = find_initial_fock_state(basis, h, target)
        best = np.abs(diag - target).min()
        assert abs(diag[k] - target) == pytest.approx(best)
    with pytest.raises(ValueError):
        find_initial_fock_state(basis, h, diag.max() + 1.0)


def test_energies_persistence_roundtrip(tmp_path):
    basis = enumerate_basis(4, 3)
    params = BathParameters(n_particles=3, **PAPER)
    eig = diagonalize(build_bath_hamiltonian(params, basis))
    path = tmp_path / "energies.csv"
    eig.save_energies(path, meta="N=3")
    loaded = Eigensystem.load_energies(path)
    assert np.abs(loaded - eig.energies).max() == 0.0
    with pytest.raises(ValueError):
        bad = tmp_path / "bad.csv"
        bad.write_text("nonsense\n1.0\n")
        Eigensystem.load_energies(bad)


def test_mean_level_spacing():
    energies = np.arange(40, dtype=float)
    assert mean_level_spacing(energies) == pytest.approx(1.0)
