"""Command-line driver: configuration in, CSV/JSON artifacts out.

Subcommands mirror the stages of the study: solve-sp (trap coefficients),
diagnose-eth (matrix elements in the eigenbasis), thermo (entropy and
inverse temperature), evolve (exact qubit+bath dynamics), master
(Born-Markov flows), compare (cross-validation of the two routes).

Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 check-mode
threshold failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bath as bath_mod
from . import config as config_mod
from . import dynamics as dyn_mod
from . import eth as eth_mod
from . import mastereq as master_mod
from . import singleparticle as sp_mod
from . import thermo as thermo_mod
from .fock import build_density_terms, enumerate_basis, mode_index, one_body_operator
from .io_utils import ManifestLock, RunManifest, write_csv, write_json

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECK = 4

SOFT_PARTICLE_CAP = 24  # beyond this, require --long


class CheckFailure(Exception):
    """A --check threshold was missed; carries the failed comparisons."""


def _grid_from_config(cfg) -> sp_mod.Grid1D:
    p = cfg["potential"]
    return sp_mod.Grid1D(p["x_min"], p["x_max"], p["n_points"])


def _potential_from_config(cfg) -> sp_mod.PotentialSpec:
    p = cfg["potential"]
    return sp_mod.PotentialSpec(
        barrier_height=p["barrier_height"],
        barrier_width=p["barrier_width"],
        width_convention=p["width_convention"],
    )


class Workspace:
    """Lazily built shared objects for one configuration."""

    def __init__(self, cfg: dict):
        self.cfg = cfg
        self._coeffs = None
        self._basis = None
        self._bath_op = None
        self._eig = None

    def coefficients(self) -> sp_mod.CoefficientSet:
        if self._coeffs is None:
            coeffs, _ = sp_mod.compute_coefficients(
                _grid_from_config(self.cfg),
                _potential_from_config(self.cfg),
                self.cfg["bath"]["g_B"],
                qubit_omega=self.cfg["qubit"]["delta"],
            )
            self._coeffs = coeffs
        return self._coeffs

    def bath_parameters(self) -> bath_mod.BathParameters:
        n = self.cfg["bath"]["N"]
        inline = self.cfg["bath"]["coefficients"]
        if inline == "solve":
            c = self.coefficients()
            return bath_mod.BathParameters(
                j0=c.j0, j1=c.j1, u0=c.u0, u1=c.u1, u01=c.u01, e0=c.e0, e1=c.e1,
                n_particles=n,
            )
        return bath_mod.BathParameters(
            j0=inline["J0"], j1=inline["J1"], u0=inline["U0"], u1=inline["U1"],
            u01=inline["U01"], e0=inline["E0"], e1=inline["E1"], n_particles=n,
        )

    def basis(self):
        if self._basis is None:
            self._basis = enumerate_basis(4, self.cfg["bath"]["N"])
        return self._basis

    def bath_operator(self):
        if self._bath_op is None:
            self._bath_op = bath_mod.build_bath_hamiltonian(self.bath_parameters(), self.basis())
        return self._bath_op

    def eigensystem(self) -> bath_mod.Eigensystem:
        if self._eig is None:
            self._eig = bath_mod.diagonalize(self.bath_operator())
        return self._eig

    def observable(self, name: str):
        """Named bath observable as a sparse Hermitian operator."""
        basis = self.basis()
        if name == "coupling":
            return one_body_operator(basis, self.coefficients().c_tensor[0, 1])
        if name.startswith("n_") and len(name) == 4:
            well, band = name[2], int(name[3])
            return build_density_terms(basis, "occupation", mode_index(well, band))
        raise config_mod.ConfigError(f"unknown observable {name!r}")

    def coupling_blocks(self) -> dyn_mod.CouplingBlocks:
        form = self.cfg["coupling"]["form"]
        if form == "full":
            return dyn_mod.CouplingBlocks.from_c_tensor(self.basis(), self.coefficients().c_tensor)
        obs = self.observable(self.cfg["coupling"]["observable"])
        if form == "sigma_x":
            return dyn_mod.CouplingBlocks.sigma_x(obs)
        return dyn_mod.CouplingBlocks.sigma_z(obs)

    def coupling_observable(self):
        """The bath operator in the energy-exchange channel."""
        form = self.cfg["coupling"]["form"]
        if form == "full":
            return one_body_operator(self.basis(), self.coefficients().c_tensor[0, 1])
        if form == "sigma_x":
            return self.observable(self.cfg["coupling"]["observable"])
        raise config_mod.ConfigError("sigma_z coupling exchanges no energy; use master --mode dephasing")


def _require_close(failures, name, value, target, rel_tol):
    dev = abs(value - target) / abs(target)
    status = "ok" if dev <= rel_tol else "FAIL"
    print(f"  check {name}: value={value:.6g} target={target:.6g} dev={dev:.1%} [{status}]")
    if dev > rel_tol:
        failures.append(f"{name}: {value:.6g} vs {target:.6g} ({dev:.1%} > {rel_tol:.0%})")


def cmd_solve_sp(ws: Workspace, out: Path, manifest: RunManifest, check: bool):
    cfg = ws.cfg
    grid = _grid_from_config(cfg)
    potential = _potential_from_config(cfg)
    coeffs, orbitals = sp_mod.compute_coefficients(
        grid, potential, cfg["bath"]["g_B"], qubit_omega=cfg["qubit"]["delta"]
    )
    ws._coeffs = coeffs
    payload = coeffs.as_dict()
    payload["g_B"] = cfg["bath"]["g_B"]
    payload["potential"] = {
        "barrier_height": potential.barrier_height,
        "barrier_width": potential.barrier_width,
        "width_convention": potential.width_convention,
    }
    manifest.add_artifact(write_json(out / "coefficients.json", payload))
    manifest.add_artifact(
        write_csv(
            out / "orbitals.csv",
            ["x", "phi_L0", "phi_R0", "phi_L1", "phi_R1", "psi_0", "psi_1"],
            [grid.x, *orbitals.bath, *orbitals.qubit],
        )
    )
    for key in config_mod.COEFFICIENT_KEYS:
        manifest.add_result(key, payload[key])
    if check:
        failures = []
        for key, target in sp_mod.REFERENCE_COEFFICIENTS.items():
            _require_close(failures, key, payload[key], target, 0.10)
        if failures:
            raise CheckFailure("; ".join(failures))


def _bath_with_energies(ws: Workspace, out: Path, manifest: RunManifest):
    eig = ws.eigensystem()
    path = out / "bath_energies.csv"
    eig.save_energies(path, meta=f"N={ws.cfg['bath']['N']}")
    manifest.add_artifact(path)
    return eig


def cmd_diagnose_eth(ws: Workspace, out: Path, manifest: RunManifest, check: bool):
    cfg = ws.cfg
    eig = _bath_with_energies(ws, out, manifest)
    obs_name = cfg["eth"]["observable"]
    obs = eth_mod.transform_observable(ws.observable(obs_name), eig, label=obs_name)
    profile, fluct = eth_mod.split_smooth_fluctuation(
        obs, window_width=cfg["eth"]["smooth_window"], min_states=cfg["eth"]["min_states"]
    )
    manifest.add_artifact(
        write_csv(
            out / "eth_diagonal.csv",
            ["E", "diag", "smooth", "residual"],
            [profile.energies, profile.diag, profile.smooth, profile.residual],
        )
    )
    e_target = config_mod.e_target_of(cfg)
    k0 = int(np.argmin(np.abs(eig.energies - e_target)))
    window = thermo_mod.build_window(eig.energies, e_target, cfg["thermo"]["delta_window"])
    dos = bath_mod.density_of_states(eig)
    estimate = eth_mod.estimate_spectral_function(
        fluct, eig, dos, window, n_bins=cfg["eth"]["n_bins"], omega_max=cfg["eth"]["omega_max"]
    )
    slc = eth_mod.offdiagonal_slice(
        eth_mod.ObservableEigenbasis(matrix=fluct, energies=eig.energies, label=obs_name), k0
    )
    e_mean = 0.5 * (slc.energies + slc.e_k0)
    envelope = np.array(
        [
            eth_mod_safe_value(estimate, om) / (2.0 * np.pi * dos(em))
            for om, em in zip(slc.energies - slc.e_k0, e_mean)
        ]
    )
    manifest.add_artifact(
        write_csv(
            out / "eth_offdiag_slice.csv",
            ["E", "R2", "envelope"],
            [slc.energies, slc.magnitudes, envelope],
        )
    )
    manifest.add_artifact(
        write_csv(
            out / "eth_spectral.csv",
            ["omega", "S", "count"],
            [estimate.omega, estimate.values, estimate.counts],
        )
    )
    t_grid = np.linspace(0.0, 50.0, 501)
    corr = eth_mod.correlation_function(obs, window, t_grid)
    manifest.add_artifact(
        write_csv(
            out / "eth_correlation.csv",
            ["t", "ReC", "ImC"],
            [t_grid, corr.real, corr.imag],
        )
    )
    manifest.add_result("k0", k0)
    manifest.add_result("E_k0", float(eig.energies[k0]))
    manifest.add_result("S_at_delta", estimate.value_at(cfg["qubit"]["delta"]))
    manifest.add_result("S_at_zero", estimate.s_zero)
    if check:
        failures = []
        # the slice envelope must peak near E_k0
        good = np.isfinite(envelope)
        peak_e = slc.energies[good][np.argmax(envelope[good])]
        if abs(peak_e - slc.e_k0) > 1.0:
            failures.append(f"slice envelope peaks at {peak_e:.3f}, k0 energy {slc.e_k0:.3f}")
        if len(profile.energies) != eig.dimension:
            failures.append("diagonal profile row count != D")
        if failures:
            raise CheckFailure("; ".join(failures))


def eth_mod_safe_value(estimate, omega):
    try:
        return estimate.value_at(float(omega))
    except ValueError:
        return float("nan")


def cmd_thermo(ws: Workspace, out: Path, manifest: RunManifest, check: bool):
    cfg = ws.cfg
    eig = _bath_with_energies(ws, out, manifest)
    curve = thermo_mod.beta_curve(
        eig.energies,
        half_width=cfg["thermo"]["delta_window"],
        n_grid=cfg["thermo"]["n_grid"],
    )
    manifest.add_artifact(
        write_csv(
            out / "thermo_curve.csv",
            ["E", "count", "S", "beta"],
            [curve.energies, curve.counts, curve.entropy, curve.beta],
        )
    )
    e_target = config_mod.e_target_of(cfg)
    beta = curve.beta_at(e_target)
    manifest.add_result("E_target", e_target)
    manifest.add_result("beta_at_target", beta)
    if check:
        failures = []
        n = cfg["bath"]["N"]
        if n == 30:
            target_e = 3.65 * n
            beta_ref = curve.beta_at(target_e)
            print(f"  check beta({target_e:.1f}) = {beta_ref:.4f} against 0.8 +- 0.15")
            if abs(beta_ref - 0.8) > 0.15:
                failures.append(f"beta(3.65N)={beta_ref:.4f} outside 0.8+-0.15")
        if failures:
            raise CheckFailure("; ".join(failures))


def _resolve_method(cfg, dim: int, override: str | None) -> str:
    method = override or cfg["dynamics"]["method"]
    if method == "auto":
        method = "spectral" if dim <= 4096 else "krylov"
    return method


def _run_one_evolution(ws: Workspace, initial_state: str, method: str | None, composite_eig=None):
    cfg = ws.cfg
    bath_op = ws.bath_operator()
    e_target = config_mod.e_target_of(cfg)
    k_init, _ = bath_mod.find_initial_fock_state(ws.basis(), bath_op, e_target)
    t_grid = np.linspace(0.0, cfg["dynamics"]["t_max"], cfg["dynamics"]["n_steps"])
    record = dyn_mod.run_experiment(
        bath_op=bath_op,
        coupling=ws.coupling_blocks(),
        g=cfg["coupling"]["g"],
        delta=cfg["qubit"]["delta"],
        initial_state=initial_state,
        bath_index=k_init,
        t_grid=t_grid,
        method=_resolve_method(cfg, 2 * bath_op.dimension, method),
        composite_eig=composite_eig,
        e_target=e_target,
    )
    return record


def cmd_evolve(ws: Workspace, out: Path, manifest: RunManifest, check: bool,
               method: str | None, both_states: bool):
    cfg = ws.cfg
    states = ["plus", "ground"] if both_states else [cfg["qubit"]["initial_state"]]
    label = cfg["dynamics"]["label"] or "run"
    eig = ws.eigensystem() if _resolve_method(cfg, 2 * ws.basis().dimension, method) == "spectral" else None
    composite_eig = None
    ratios = {}
    for state in states:
        if eig is not None and composite_eig is None:
            h = dyn_mod.build_composite_hamiltonian(
                cfg["qubit"]["delta"], ws.bath_operator(), cfg["coupling"]["g"], ws.coupling_blocks()
            )
            composite_eig = bath_mod.diagonalize(h, validate=False)
        record = _run_one_evolution(ws, state, method, composite_eig=composite_eig)
        tag = f"{label}_{state}"
        manifest.add_artifact(
            write_csv(
                out / f"evolve_{tag}.csv",
                ["t", "rho11", "rho22", "Re_rho12", "Im_rho12", "E_bath", "E_total"],
                [record.times, record.rho11, record.rho22, record.rho12.real,
                 record.rho12.imag, record.e_bath, record.e_total],
            )
        )
        sidecar = record.summary()
        sidecar["config_hash"] = config_mod.config_hash(cfg)
        sidecar["g"] = cfg["coupling"]["g"]
        sidecar["delta"] = cfg["qubit"]["delta"]
        try:
            curve = thermo_mod.beta_curve(ws.eigensystem().energies,
                                          half_width=cfg["thermo"]["delta_window"],
                                          n_grid=cfg["thermo"]["n_grid"])
            beta = curve.beta_at(record.e_target)
            sidecar["beta"] = beta
            sidecar["thermal_ratio_target"] = math.exp(beta * cfg["qubit"]["delta"])
        except ValueError:
            sidecar["beta"] = None
            sidecar["thermal_ratio_target"] = None
        manifest.add_artifact(write_json(out / f"evolve_{tag}.json", sidecar))
        ratios[state] = record.ratio_longtime
        manifest.add_result(f"ratio_{tag}", record.ratio_longtime)
        if sidecar["thermal_ratio_target"] is not None:
            deviation = abs(record.ratio_longtime / sidecar["thermal_ratio_target"] - 1.0)
            manifest.add_result(f"thermal_deviation_{tag}", deviation)
            flag = "within" if deviation <= 0.25 else "OUTSIDE"
            manifest.add_result(f"thermal_{tag}", flag)
    if check:
        failures = []
        target = None
        for state in states:
            rec_path = out / f"evolve_{label}_{state}.json"
            with open(rec_path) as f:
                target = json.load(f)["thermal_ratio_target"]
        if target is not None:
            for state, ratio in ratios.items():
                _require_close(failures, f"ratio_{state} vs e^(beta*Delta)", ratio, target, 0.15)
        if failures:
            raise CheckFailure("; ".join(failures))


def _master_params(cfg) -> master_mod.MasterEqParams:
    m = cfg["master"]
    delta = cfg["qubit"]["delta"]
    if "beta" in m and m.get("beta") is not None and "thermal_ratio" not in m:
        beta = m["beta"]
    else:
        beta = math.log(m["thermal_ratio"]) / delta
    return master_mod.MasterEqParams.from_rates(
        delta=delta,
        beta=beta,
        gamma=m["gamma"],
        delta_shift=m["delta_shift"],
        s_zero=m["s_zero"],
    )


def cmd_master(ws: Workspace, out: Path, manifest: RunManifest, check: bool):
    cfg = ws.cfg
    mode = cfg["master"]["mode"]
    params = _master_params(cfg)
    rhs = master_mod.rhs_thermalizing if mode == "thermalizing" else master_mod.rhs_dephasing
    t_grid = np.linspace(0.0, cfg["master"]["t_max"], cfg["master"]["n_steps"])
    initial = np.array([0.5, 0.5, 0.5, 0.5], dtype=np.complex128)
    traj = master_mod.integrate(rhs, initial, t_grid, params)
    manifest.add_artifact(
        write_csv(
            out / f"master_{mode}.csv",
            ["t", "rho11", "rho22", "Re_rho12", "Im_rho12"],
            [t_grid, traj[:, 0].real, traj[:, 1].real, traj[:, 2].real, traj[:, 2].imag],
        )
    )
    summary = {
        "mode": mode,
        "gamma": params.gamma,
        "delta_shift": params.delta_shift,
        "beta": params.beta,
    }
    if mode == "thermalizing":
        steady = master_mod.steady_state_thermal(params)
        fits = master_mod.rate_fit(t_grid, traj, rho11_infinity=float(steady[0].real))
        summary.update(
            steady_rho11=float(steady[0].real),
            steady_rho22=float(steady[1].real),
            population_rate=fits.population_rate,
            coherence_rate=fits.coherence_rate,
            oscillation_frequency=fits.frequency,
            fit_flagged=fits.flagged,
        )
    else:
        rate = 2.0 * params.g**2 * params.s_zero
        summary["dephasing_rate"] = rate
    path = write_json(out / "master_summary.json", summary)
    manifest.add_artifact(path)
    for k, v in summary.items():
        manifest.add_result(k, v)
    if check and mode == "thermalizing":
        failures = []
        final = traj[-1]
        _require_close(failures, "steady rho11", float(final[0].real), summary["steady_rho11"], 1e-5)
        ratio = summary["population_rate"] / summary["coherence_rate"]
        _require_close(failures, "rate ratio", ratio, 2.0, 0.05)
        omega_target = math.sqrt(
            params.delta * (params.delta + 4 * params.delta_shift) - params.gamma**2
        )
        _require_close(failures, "oscillation frequency", summary["oscillation_frequency"],
                       omega_target, 0.02)
        if failures:
            raise CheckFailure("; ".join(failures))


def cmd_compare(ws: Workspace, out: Path, manifest: RunManifest, check: bool, method: str | None):
    cfg = ws.cfg
    if cfg["coupling"]["form"] == "sigma_z":
        raise config_mod.ConfigError("compare needs an energy-exchanging coupling form")
    eig = ws.eigensystem()
    e_target = config_mod.e_target_of(cfg)
    delta = cfg["qubit"]["delta"]
    g = cfg["coupling"]["g"]

    curve = thermo_mod.beta_curve(eig.energies, half_width=cfg["thermo"]["delta_window"],
                                  n_grid=cfg["thermo"]["n_grid"])
    beta = curve.beta_at(e_target)

    obs = eth_mod.transform_observable(ws.coupling_observable(), eig, label="coupling")
    window = thermo_mod.build_window(eig.energies, e_target, cfg["thermo"]["delta_window"])
    _, fluct = eth_mod.split_smooth_fluctuation(
        obs, window_width=cfg["eth"]["smooth_window"], min_states=cfg["eth"]["min_states"]
    )
    dos = bath_mod.density_of_states(eig)
    estimate = eth_mod.estimate_spectral_function(
        fluct, eig, dos, window, n_bins=cfg["eth"]["n_bins"], omega_max=cfg["eth"]["omega_max"]
    )
    s_delta = estimate.value_at(delta)
    s_zero = estimate.s_zero
    o_eb = thermo_mod.microcanonical_average(window, obs.matrix)
    integrals = master_mod.rate_integrals(obs, window, delta)

    params = master_mod.MasterEqParams(
        delta=delta, beta=beta, g=g, s_delta=s_delta, s_zero=s_zero, o_eb=o_eb
    )
    steady = master_mod.steady_state_thermal(params)
    master_ratio = float(steady[0].real / steady[1].real)

    records = {}
    composite_eig = None
    if _resolve_method(cfg, 2 * ws.basis().dimension, method) == "spectral":
        h = dyn_mod.build_composite_hamiltonian(delta, ws.bath_operator(), g, ws.coupling_blocks())
        composite_eig = bath_mod.diagonalize(h, validate=False)
    for state in ("plus", "ground"):
        records[state] = _run_one_evolution(ws, state, method, composite_eig=composite_eig)

    report = {
        "E_target": e_target,
        "beta": beta,
        "provenance": {
            "beta": "thermo.beta_curve on the exact spectrum",
            "S_delta": "eth.estimate_spectral_function at omega=Delta",
            "S_zero": "two-smallest-bin extrapolation",
            "gamma": "g^2 S(Delta) cosh(beta Delta / 2)",
            "delta_shift": "g^2 O(E_B)^2 / Delta",
            "rate_terms": "2*pi*golden-rule kernel at omega=+-Delta",
        },
        "S_delta": s_delta,
        "S_zero": s_zero,
        "O_EB": o_eb,
        "gamma": params.gamma,
        "delta_shift": params.delta_shift,
        "rate_term_plus": integrals["term_plus"],
        "rate_term_minus": integrals["term_minus"],
        "rate_term_ratio": integrals["term_plus"] / max(integrals["term_minus"], 1e-300),
        "detailed_balance_target": math.exp(beta * delta),
        "master_steady_ratio": master_ratio,
        "evolve_ratio_plus": records["plus"].ratio_longtime,
        "evolve_ratio_ground": records["ground"].ratio_longtime,
    }
    path = write_json(out / "compare_report.json", report)
    manifest.add_artifact(path)
    for key in ("beta", "S_delta", "gamma", "master_steady_ratio",
                "evolve_ratio_plus", "evolve_ratio_ground"):
        manifest.add_result(key, report[key])
    print(json.dumps(report, indent=2, default=float))
    if check:
        failures = []
        for state in ("plus", "ground"):
            _require_close(
                failures, f"evolve[{state}] vs master steady",
                records[state].ratio_longtime, master_ratio, 0.20,
            )
        if failures:
            raise CheckFailure("; ".join(failures))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ethbath",
        description="ETH heat-bath laboratory: exact diagnostics and qubit thermalization",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("solve-sp", "solve the double-well single-particle problem and export coefficients"),
        ("diagnose-eth", "observable matrix elements in the bath eigenbasis"),
        ("thermo", "microcanonical entropy and inverse temperature curve"),
        ("evolve", "exact unitary qubit+bath evolution"),
        ("master", "Born-Markov master equation trajectories"),
        ("compare", "cross-validate exact dynamics against the master equation"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--out", required=True, help="output directory for artifacts")
        p.add_argument("--check", action="store_true", help="verify reference targets; exit 4 on miss")
        p.add_argument("--long", action="store_true", help="allow full-scale (N>24) runs")
        if name in ("evolve", "compare"):
            p.add_argument("--method", choices=["spectral", "krylov"], default=None)
        if name == "evolve":
            p.add_argument("--both", action="store_true", help="run both qubit initial states")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_mod.load_config(args.config)
    except (config_mod.ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg["bath"]["N"] > SOFT_PARTICLE_CAP and not args.long:
        print(
            f"config error: N={cfg['bath']['N']} exceeds the desk-scale cap "
            f"{SOFT_PARTICLE_CAP}; pass --long for full-scale runs",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ws = Workspace(cfg)
    manifest = RunManifest(args.command, config_mod.config_hash(cfg), out)
    try:
        with ManifestLock(out):
            if args.command == "solve-sp":
                cmd_solve_sp(ws, out, manifest, args.check)
            elif args.command == "diagnose-eth":
                cmd_diagnose_eth(ws, out, manifest, args.check)
            elif args.command == "thermo":
                cmd_thermo(ws, out, manifest, args.check)
            elif args.command == "evolve":
                cmd_evolve(ws, out, manifest, args.check, args.method, args.both)
            elif args.command == "master":
                cmd_master(ws, out, manifest, args.check)
            elif args.command == "compare":
                cmd_compare(ws, out, manifest, args.check, args.method)
    except CheckFailure as exc:
        manifest.add_result("check_failures", str(exc))
        manifest.write()
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except config_mod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, AssertionError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    manifest.write()
    print(f"wrote {len(manifest.data['artifacts'])} artifacts to {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
