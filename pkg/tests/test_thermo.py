import numpy as np
import pytest

from ethbath.thermo import (
    MicrocanonicalWindow,
    beta_curve,
    build_window,
    entropy,
    microcanonical_average,
)


def test_window_examples():
    spectrum = np.array([0.0, 1.0, 2.0, 3.0])
    w = build_window(spectrum, 1.5, 1.0)
    assert sorted(w.members.tolist()) == [1, 2]
    assert w.count == 2

    whole = build_window(spectrum, 1.5, 10.0)
    assert whole.count == 4

    isolated = build_window(spectrum, 0.0, 0.4)
    assert isolated.count == 1
    assert entropy(isolated) == 0.0

    with pytest.raises(ValueError):
        build_window(spectrum, 10.0, 0.5)
    with pytest.raises(ValueError):
        build_window(spectrum, 1.0, -1.0)


def test_entropy_values():
    w7 = MicrocanonicalWindow(0.0, 1.0, np.arange(7))
    assert entropy(w7) == pytest.approx(np.log(7.0))
    # uniform-mixture identity at small dimension
    for n in range(1, 11):
        p = np.full(n, 1.0 / n)
        von_neumann = -(p * np.log(p)).sum()
        w = MicrocanonicalWindow(0.0, 1.0, np.arange(n))
        assert entropy(w) == pytest.approx(von_neumann, abs=1e-12)


def synthetic_exponential_spectrum(beta0, n_levels, e_max, seed=0):
    """Oracle spectrum with density rho(E) ~ exp(beta0 E) by inverse CDF."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(size=n_levels)
    return np.sort(np.log1p(u * np.expm1(beta0 * e_max)) / beta0)


def test_beta_recovery_on_synthetic_spectrum():
    beta0 = 0.8
    spectrum = synthetic_exponential_spectrum(beta0, 300000, 6.0)
    curve = beta_curve(spectrum, half_width=0.5, n_grid=50)
    # beta0 recovered as the curve level over the central half of the support;
    # single grid points carry shot noise from the window counts
    probes = np.linspace(2.4, 4.5, 5)
    values = np.array([curve.beta_at(e) for e in probes])
    assert values.mean() == pytest.approx(beta0, rel=0.05)
    assert np.abs(values / beta0 - 1.0).max() < 0.15


def test_beta_zero_on_flat_spectrum():
    spectrum = np.linspace(0.0, 10.0, 5001)  # constant density
    curve = beta_curve(spectrum, half_width=0.3)
    mid = np.abs(curve.energies - 5.0) < 2.0
    assert np.abs(curve.beta[mid]).max() < 1e-6


def test_beta_curve_masks_empty_windows():
    spectrum = np.concatenate([np.linspace(0, 1, 300), np.linspace(9, 10, 300)])
    curve = beta_curve(spectrum, half_width=0.2, n_grid=100)
    gap = (curve.energies > 2.0) & (curve.energies < 8.0)
    assert np.all(np.isnan(curve.entropy[gap]))
    assert np.all(curve.counts[gap] == 0)


def test_entropy_nondecreasing_in_window_width():
    rng = np.random.default_rng(5)
    spectrum = np.sort(rng.uniform(0, 20, size=2000))
    widths = [0.1, 0.3, 0.9, 2.7]
    entropies = [entropy(build_window(spectrum, 10.0, w)) for w in widths]
    assert all(b >= a for a, b in zip(entropies, entropies[1:]))


def test_microcanonical_average():
    w = build_window(np.array([0.0, 1.0, 2.0]), 1.0, 5.0)
    assert microcanonical_average(w, np.eye(3)) == pytest.approx(1.0)

    single = build_window(np.array([0.0, 1.0, 2.0]), 2.0, 0.1)
    diag = np.array([5.0, 7.0, 11.0])
    assert microcanonical_average(single, diag) == pytest.approx(11.0)

    three = build_window(np.array([0.0, 1.0, 2.0]), 1.0, 1.5)
    assert microcanonical_average(three, diag) == pytest.approx((5 + 7 + 11) / 3)


def test_microcanonical_average_gauge_invariant():
    # depends only on Tr(P O P): invariant under rotations among degenerate
    # eigenvectors, checked via an explicit 2-fold degenerate block
    rng = np.random.default_rng(8)
    o = rng.normal(size=(4, 4))
    o = 0.5 * (o + o.T)
    members = np.array([1, 2])
    w = MicrocanonicalWindow(0.0, 1.0, members)
    theta = 0.7
    rot = np.eye(4)
    rot[1:3, 1:3] = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    o_rot = rot.T @ o @ rot
    assert microcanonical_average(w, o_rot) == pytest.approx(
        microcanonical_average(w, o), rel=1e-12
    )
