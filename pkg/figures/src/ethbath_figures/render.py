"""Figure regeneration from ethbath artifacts.

Pure presentation: every plotted value is read from a CSV (reference lines
come from the JSON sidecars); the module performs no numerical
transformation beyond axis scaling. SVG output is byte-stable for fixed
inputs (timestamps and id salts are pinned).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5")


class ArtifactError(RuntimeError):
    """An input artifact is missing or malformed; carries the offending path."""


@dataclass
class FigureSpec:
    figure_id: str
    csv_paths: dict = field(default_factory=dict)     # role -> Path
    json_paths: dict = field(default_factory=dict)    # role -> Path
    expected_headers: dict = field(default_factory=dict)

    def validate(self):
        for role, path in {**self.csv_paths, **self.json_paths}.items():
            if not Path(path).exists():
                raise ArtifactError(f"missing artifact for {self.figure_id}/{role}: {path}")
        for role, header in self.expected_headers.items():
            first = Path(self.csv_paths[role]).read_text().splitlines()[0]
            if first != header:
                raise ArtifactError(
                    f"schema mismatch for {self.figure_id}/{role}: "
                    f"{self.csv_paths[role]} has header {first!r}, expected {header!r}"
                )


def read_csv(path):
    path = Path(path)
    try:
        with open(path) as f:
            header = f.readline().rstrip("\n").split(",")
            data = np.loadtxt(f, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ArtifactError(f"unreadable artifact {path}: {exc}") from None
    if data.shape[1] != len(header):
        raise ArtifactError(f"column count mismatch in {path}")
    return {name: data[:, i] for i, name in enumerate(header)}


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"unreadable artifact {path}: {exc}") from None


def build_spec(figure_id: str, artifact_dir) -> FigureSpec:
    d = Path(artifact_dir)
    if figure_id == "fig1":
        return FigureSpec(
            "fig1",
            csv_paths={"master": d / "master_thermalizing.csv"},
            json_paths={"summary": d / "master_summary.json"},
            expected_headers={"master": "t,rho11,rho22,Re_rho12,Im_rho12"},
        )
    if figure_id == "fig2":
        return FigureSpec(
            "fig2",
            csv_paths={"diagonal": d / "eth_diagonal.csv",
                       "slice": d / "eth_offdiag_slice.csv"},
            expected_headers={"diagonal": "E,diag,smooth,residual",
                              "slice": "E,R2,envelope"},
        )
    if figure_id == "fig3":
        return FigureSpec(
            "fig3",
            csv_paths={"curve": d / "thermo_curve.csv"},
            expected_headers={"curve": "E,count,S,beta"},
        )
    if figure_id in ("fig4", "fig5"):
        prefix = "eth" if figure_id == "fig4" else "noneth"
        runs = sorted(d.glob(f"evolve_{prefix}_*.csv"))
        if not runs:
            raise ArtifactError(
                f"missing artifact for {figure_id}: {d / f'evolve_{prefix}_*.csv'}"
            )
        spec = FigureSpec(figure_id)
        for path in runs:
            tag = path.stem.removeprefix("evolve_")
            spec.csv_paths[tag] = path
            spec.expected_headers[tag] = "t,rho11,rho22,Re_rho12,Im_rho12,E_bath,E_total"
            sidecar = path.with_suffix(".json")
            if sidecar.exists():
                spec.json_paths[tag] = sidecar
        return spec
    raise ArtifactError(f"unknown figure id {figure_id!r}; options: {FIGURE_IDS}")


def _render_fig1(spec, ax):
    data = read_csv(spec.csv_paths["master"])
    summary = read_json(spec.json_paths["summary"])
    ax.plot(data["t"], data["rho11"], label=r"$\rho_{11}$")
    ax.plot(data["t"], data["rho22"], label=r"$\rho_{22}$")
    ax.plot(data["t"], data["Re_rho12"], label=r"Re $\rho_{12}$")
    ax.plot(data["t"], data["Im_rho12"], label=r"Im $\rho_{12}$")
    for key in ("steady_rho11", "steady_rho22"):
        if key in summary:
            ax.axhline(summary[key], color="gray", lw=0.6, ls=":")
    ax.set_xlabel(r"$t\ [\hbar/\epsilon_0]$")
    ax.set_ylabel("density-matrix elements")
    ax.legend(loc="center right", fontsize=8)


def _render_fig2(spec, ax):
    diag = read_csv(spec.csv_paths["diagonal"])
    ax.plot(diag["E"], diag["diag"], ".", ms=2, label=r"$O_{kk}$")
    ax.plot(diag["E"], diag["smooth"], "-", lw=1.2, label="windowed mean")
    ax.set_xlabel(r"$E\ [\epsilon_0]$")
    ax.set_ylabel("diagonal matrix elements")
    ax.legend(loc="upper left", fontsize=8)
    slc = read_csv(spec.csv_paths["slice"])
    inset = ax.inset_axes([0.55, 0.55, 0.42, 0.4])
    inset.plot(slc["E"], slc["R2"], ".", ms=1.5)
    finite = np.isfinite(slc["envelope"])
    inset.plot(slc["E"][finite], slc["envelope"][finite], "r-", lw=1.0)
    inset.set_xlabel(r"$E_k$", fontsize=7)
    inset.set_ylabel(r"$|R_{kk_0}|^2$", fontsize=7)
    inset.tick_params(labelsize=6)


def _render_fig3(spec, ax):
    curve = read_csv(spec.csv_paths["curve"])
    good = np.isfinite(curve["beta"])
    ax.plot(curve["E"][good], curve["beta"][good], "-")
    ax.axhline(0.0, color="gray", lw=0.6, ls=":")
    ax.set_xlabel(r"$E\ [\epsilon_0]$")
    ax.set_ylabel(r"$\beta(E)\ [\epsilon_0^{-1}]$")
    inset = ax.inset_axes([0.6, 0.6, 0.37, 0.35])
    good_s = np.isfinite(curve["S"])
    inset.plot(curve["E"][good_s], curve["S"][good_s], "-", lw=1.0)
    inset.set_xlabel(r"$E$", fontsize=7)
    inset.set_ylabel(r"$S(E)$", fontsize=7)
    inset.tick_params(labelsize=6)


def _render_evolution(spec, ax):
    styles = ("-", "--", "-.", ":")
    inset = ax.inset_axes([0.62, 0.18, 0.35, 0.3])
    for style, (tag, path) in zip(styles, sorted(spec.csv_paths.items())):
        data = read_csv(path)
        ax.plot(data["t"], data["rho11"], style, label=rf"$\rho_{{11}}$ [{tag}]")
        ax.plot(data["t"], data["rho22"], style, label=rf"$\rho_{{22}}$ [{tag}]")
        inset.plot(data["t"], data["E_bath"], style, lw=0.9)
        sidecar = spec.json_paths.get(tag)
        if sidecar:
            summary = read_json(sidecar)
            target = summary.get("thermal_ratio_target")
            if target:
                ax.axhline(target / (1 + target), color="gray", lw=0.6, ls=":")
                ax.axhline(1 / (1 + target), color="gray", lw=0.6, ls=":")
    ax.set_xlabel(r"$t\ [\hbar/\epsilon_0]$")
    ax.set_ylabel("qubit populations")
    ax.legend(fontsize=7, loc="center right")
    inset.set_xlabel(r"$t$", fontsize=7)
    inset.set_ylabel(r"$\langle H_B\rangle$", fontsize=7)
    inset.tick_params(labelsize=6)


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig3": _render_fig3,
    "fig4": _render_evolution,
    "fig5": _render_evolution,
}


def render(spec: FigureSpec, out_dir):
    """Render one figure to <figure_id>.svg; returns (figure, path)."""
    spec.validate()
    with plt.rc_context({"svg.hashsalt": spec.figure_id, "figure.dpi": 120}):
        fig, ax = plt.subplots(figsize=(5.2, 3.6), constrained_layout=True)
        _RENDERERS[spec.figure_id](spec, ax)
        out = Path(out_dir) / f"{spec.figure_id}.svg"
        fig.savefig(out, format="svg", metadata={"Date": None})
    return fig, out
