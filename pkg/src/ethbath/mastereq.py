"""Born-Markov master equation for the qubit.

Two flows are provided: the thermalizing flow for energy-exchanging
coupling (asymmetric rates e^{+-beta*Delta/2} on the populations, damped
rotation of the coherences) and the pure-dephasing flow for sigma_z
coupling (populations structurally frozen). hbar = 1 throughout; times in
hbar per energy unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eth import ObservableEigenbasis, golden_rule_kernel
from .thermo import MicrocanonicalWindow, microcanonical_average


@dataclass(frozen=True)
class MasterEqParams:
    delta: float            # qubit splitting
    beta: float             # bath inverse temperature
    g: float                # coupling strength
    s_delta: float          # spectral function at omega = Delta
    s_zero: float = 0.0     # spectral function at omega = 0 (dephasing)
    o_eb: float = 0.0       # microcanonical average of the coupling observable

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("Delta must be positive")
        if self.s_delta < 0 or self.s_zero < 0:
            raise ValueError("spectral function values must be >= 0")

    @property
    def g2s(self) -> float:
        return self.g**2 * self.s_delta

    @property
    def gamma(self) -> float:
        return self.g2s * math.cosh(self.beta * self.delta / 2.0)

    @property
    def delta_shift(self) -> float:
        return self.g**2 * self.o_eb**2 / self.delta

    @classmethod
    def from_rates(
        cls, delta: float, beta: float, gamma: float, delta_shift: float, s_zero: float = 0.0
    ) -> "MasterEqParams":
        """Construct from the damping rate and level shift directly (g folded in)."""
        s_delta = gamma / math.cosh(beta * delta / 2.0)
        o_eb = math.sqrt(delta_shift * delta)
        return cls(delta=delta, beta=beta, g=1.0, s_delta=s_delta, s_zero=s_zero, o_eb=o_eb)


def rhs_thermalizing(state: np.ndarray, params: MasterEqParams) -> np.ndarray:
    """Time derivative of (rho11, rho22, rho12, rho21) under the thermalizing flow."""
    r11, r22, r12, r21 = state
    x = params.beta * params.delta / 2.0
    down = params.g2s * math.exp(-x)   # loss of rho11
    up = params.g2s * math.exp(+x)     # gain of rho11 from rho22
    gamma = params.gamma
    dd = params.delta + 2.0 * params.delta_shift
    shift2 = 2.0 * params.delta_shift
    return np.array(
        [
            -down * r11 + up * r22,
            down * r11 - up * r22,
            1j * dd * r12 + 1j * shift2 * r21 - gamma * (r12 - r21),
            -1j * dd * r21 - 1j * shift2 * r12 - gamma * (r21 - r12),
        ],
        dtype=np.complex128,
    )


def rhs_dephasing(state: np.ndarray, params: MasterEqParams) -> np.ndarray:
    """Pure dephasing: populations frozen, coherences decay at 2 g^2 S(0)."""
    _, _, r12, r21 = state
    rate = 2.0 * params.g**2 * params.s_zero
    return np.array(
        [
            0.0,
            0.0,
            (-rate + 1j * params.delta) * r12,
            (-rate - 1j * params.delta) * r21,
        ],
        dtype=np.complex128,
    )


def steady_state_thermal(params: MasterEqParams) -> np.ndarray:
    """Fixed point of the thermalizing flow: detailed balance, no coherence."""
    x = params.beta * params.delta / 2.0
    down = math.exp(-x)
    up = math.exp(+x)
    r11 = up / (up + down)
    return np.array([r11, 1.0 - r11, 0.0, 0.0], dtype=np.complex128)


def max_stable_step(params: MasterEqParams) -> float:
    """Step bound for the fixed-step integrator."""
    bound = 0.01 / params.delta
    if params.gamma > 0:
        bound = min(bound, 0.1 / params.gamma)
    return bound


def integrate(
    rhs,
    initial: np.ndarray,
    t_grid: np.ndarray,
    params: MasterEqParams,
    max_step: float | None = None,
) -> np.ndarray:
    """Classical fixed-step RK4 over the output grid.

    Returns the trajectory with shape (len(t_grid), 4). A max_step larger
    than the stability bound is refused.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing with >= 2 points")
    bound = max_stable_step(params)
    if max_step is None:
        max_step = bound
    elif max_step > bound:
        raise ValueError(f"step {max_step} exceeds the stability bound {bound:.3g}")
    y = np.asarray(initial, dtype=np.complex128).copy()
    out = np.empty((len(t_grid), 4), dtype=np.complex128)
    out[0] = y
    for i in range(1, len(t_grid)):
        span = t_grid[i] - t_grid[i - 1]
        n_sub = max(1, int(math.ceil(span / max_step)))
        h = span / n_sub
        for _ in range(n_sub):
            k1 = rhs(y, params)
            k2 = rhs(y + 0.5 * h * k1, params)
            k3 = rhs(y + 0.5 * h * k2, params)
            k4 = rhs(y + h * k3, params)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i] = y
    return out


@dataclass
class RateFit:
    population_rate: float
    coherence_rate: float
    frequency: float
    population_residual: float
    coherence_residual: float
    flagged: bool


def _loglinear_fit(t: np.ndarray, y: np.ndarray):
    mask = y > 0
    if mask.sum() < 2:
        return float("nan"), float("inf")
    t, y = t[mask], np.log(y[mask])
    slope, intercept = np.polyfit(t, y, 1)
    resid = float(np.sqrt(np.mean((np.polyval([slope, intercept], t) - y) ** 2)))
    return -slope, resid


def rate_fit(
    t_grid: np.ndarray,
    trajectory: np.ndarray,
    rho11_infinity: float | None = None,
    residual_threshold: float = 0.05,
) -> RateFit:
    """Exponential fits of the population approach and the coherence envelope.

    The oscillation frequency comes from the zero crossings of Re(rho12).
    A poor fit is flagged but the values are still reported.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    r11 = trajectory[:, 0].real
    r12 = trajectory[:, 2]
    if rho11_infinity is None:
        rho11_infinity = float(r11[-len(r11) // 10 :].mean())
    dev = np.abs(r11 - rho11_infinity)
    # fit only while the signal is well above the noise floor
    top = dev.max()
    usable = dev > max(top * math.exp(-6.0), 1e-12)
    cutoff = np.argmin(usable) if not usable.all() and usable[0] else len(dev)
    pop_rate, pop_res = _loglinear_fit(t_grid[:cutoff], dev[:cutoff])

    mag = np.abs(r12)
    peaks = np.nonzero((mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:]))[0] + 1
    peaks = peaks[mag[peaks] > mag.max() * math.exp(-6.0)]
    if len(peaks) < 3:
        coh_rate, coh_res = _loglinear_fit(t_grid, mag)
    else:
        coh_rate, coh_res = _loglinear_fit(t_grid[peaks], mag[peaks])

    re12 = r12.real
    sign_change = np.nonzero(np.sign(re12[:-1]) * np.sign(re12[1:]) < 0)[0]
    if len(sign_change) >= 2:
        crossings = []
        for i in sign_change:
            f = re12[i] / (re12[i] - re12[i + 1])
            crossings.append(t_grid[i] + f * (t_grid[i + 1] - t_grid[i]))
        crossings = np.array(crossings)
        slope = np.polyfit(np.arange(len(crossings)), crossings, 1)[0]
        frequency = math.pi / slope
    else:
        frequency = float("nan")

    flagged = pop_res > residual_threshold or coh_res > residual_threshold
    return RateFit(
        population_rate=float(pop_rate),
        coherence_rate=float(coh_rate),
        frequency=float(frequency),
        population_residual=pop_res,
        coherence_residual=coh_res,
        flagged=flagged,
    )


def rate_integrals(
    obs: ObservableEigenbasis,
    window: MicrocanonicalWindow,
    delta: float,
    kernel_half_width: float = 0.1,
) -> dict:
    """Dissipative and shift terms of the rate integral from exact bath data.

    Returns the two golden-rule terms (the e^{+-beta*Delta/2} pair, here
    2*pi times the transition kernel at omega = +-Delta) and the
    principal-value shift O^2(E_B)/Delta. The overall normalization of the
    dissipative terms is fixed by matching the thermalizing flow; their
    ratio is the physically meaningful detailed-balance factor.
    """
    term_plus = 2.0 * np.pi * golden_rule_kernel(obs, window, +delta, kernel_half_width)
    term_minus = 2.0 * np.pi * golden_rule_kernel(obs, window, -delta, kernel_half_width)
    o_eb = microcanonical_average(window, obs.matrix)
    return {
        "term_plus": term_plus,          # ~ S(Delta) e^{+beta Delta/2}
        "term_minus": term_minus,        # ~ S(Delta) e^{-beta Delta/2}
        "shift": o_eb**2 / delta,
        "o_eb": o_eb,
    }


def perturbative_shift(
    x_matrix: np.ndarray, o_eb: float, g: float, level_energies: np.ndarray
) -> np.ndarray:
    """Second-order level shifts of a small system coupled through X*O.

    delta_eps_l = g X_ll O + g^2 O^2 sum_{l' != l} |X_ll'|^2 / (eps_l - eps_l').
    """
    x_matrix = np.asarray(x_matrix)
    eps = np.asarray(level_energies, dtype=float)
    n = len(eps)
    diffs = eps[:, None] - eps[None, :]
    off = ~np.eye(n, dtype=bool)
    if np.any(np.abs(diffs[off]) < 1e-12):
        raise ValueError("perturbation theory requires non-degenerate levels")
    shifts = g * np.real(np.diagonal(x_matrix)) * o_eb
    for l in range(n):
        for lp in range(n):
            if lp == l:
                continue
            shifts[l] += g**2 * o_eb**2 * abs(x_matrix[l, lp]) ** 2 / (eps[l] - eps[lp])
    return shifts
