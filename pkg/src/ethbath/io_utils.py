"""Artifact persistence: CSV in a fixed lossless dialect, run manifests.

CSV dialect: comma separators, '.' decimal, header row, LF endings, 17
significant digits so doubles round-trip exactly.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np


def format_value(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if np.isnan(x):
            return "nan"
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path, header: list[str], columns: list[np.ndarray]):
    """Write columns of equal length under the given header."""
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise ValueError("all columns must have equal length")
    path = Path(path)
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in zip(*columns):
            f.write(",".join(format_value(v) for v in row) + "\n")
    return path


def read_csv(path):
    """Read a dialect CSV back into (header, dict of float arrays)."""
    with open(path) as f:
        header = f.readline().rstrip("\n").split(",")
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    if data.size == 0:
        return header, {name: np.empty(0) for name in header}
    return header, {name: data[:, i] for i, name in enumerate(header)}


class ManifestLock:
    """Guards an output directory against concurrent runs."""

    def __init__(self, out_dir: Path):
        self.path = Path(out_dir) / "manifest.lock"

    def __enter__(self):
        try:
            self.path.touch(exist_ok=False)
        except FileExistsError:
            raise RuntimeError(
                f"output directory is locked by another run ({self.path}); "
                "remove the lock file if that run is dead"
            ) from None
        return self

    def __exit__(self, *exc):
        self.path.unlink(missing_ok=True)
        return False


class RunManifest:
    def __init__(self, command: str, config_digest: str, out_dir: Path):
        self.data = {
            "command": command,
            "config_hash": config_digest,
            "version": _package_version(),
            "artifacts": [],
            "results": {},
            "wall_seconds": None,
        }
        self.out_dir = Path(out_dir)
        self._t0 = time.monotonic()

    def add_artifact(self, path):
        rel = str(Path(path).relative_to(self.out_dir))
        if rel not in self.data["artifacts"]:
            self.data["artifacts"].append(rel)

    def add_result(self, key: str, value):
        self.data["results"][key] = value

    def write(self):
        self.data["wall_seconds"] = round(time.monotonic() - self._t0, 3)
        path = self.out_dir / "manifest.json"
        with open(path, "w", newline="\n") as f:
            json.dump(self.data, f, indent=2, sort_keys=True, default=_jsonable)
            f.write("\n")
        return path


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON-serializable: {type(x)}")


def write_json(path, payload: dict):
    with open(path, "w", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=_jsonable)
        f.write("\n")
    return Path(path)


def _package_version() -> str:
    try:
        from importlib.metadata import version

        return version("ethbath")
    except Exception:
        return "unknown"
