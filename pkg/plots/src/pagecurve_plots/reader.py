"""Strict readers for pagecurve run directories.

This package never recomputes physics: it consumes the CSV series and the
``metadata.json`` written by the simulation CLI, and nothing else.  The CSV
reader is deliberately strict -- unknown columns, ragged rows or empty files
are errors, not guesses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["PlotsError", "RunData", "read_series_csv", "read_run"]

# column vocabulary of the simulation CSVs
_SERIES_FIXED = {
    "time",
    "m",
    "m_frac",
    "emitted_frac",
    "current",
    "S_vN",
    "S_vN_per_M",
    "S_min",
    "S_min_per_M",
    "bound",
    "bound_per_M",
    "Henv_mean",
    "dHenv2",
    "dHenv2_per_M",
}
_SERIES_PATTERN = re.compile(r"^S_q[0-9.e+-]+(_per_M)?$")
_ANALYTIC_FIXED = {"tau", "m_frac", "emitted_frac", "S_frac", "S_min_frac", "var_frac"}
_ANALYTIC_PATTERN = re.compile(r"^S_q[0-9.e+-]+_frac$")


class PlotsError(RuntimeError):
    """Unreadable or malformed run data."""


def _known(column: str, analytic: bool) -> bool:
    if analytic:
        return column in _ANALYTIC_FIXED or bool(_ANALYTIC_PATTERN.match(column))
    return column in _SERIES_FIXED or bool(_SERIES_PATTERN.match(column))


def read_series_csv(path: str | Path, analytic: bool = False) -> dict[str, np.ndarray]:
    """Parse one simulation CSV into column arrays, strictly.

    Raises :class:`PlotsError` on a missing file, an empty body, an unknown
    column name, or ragged rows.
    """
    path = Path(path)
    if not path.exists():
        raise PlotsError(f"missing CSV: {path}")
    lines = path.read_text().splitlines()
    if not lines:
        raise PlotsError(f"empty file: {path}")
    header = lines[0].split(",")
    unknown = [c for c in header if not _known(c, analytic)]
    if unknown:
        raise PlotsError(f"{path}: unknown column(s) {unknown}; refusing to guess")
    body = [ln for ln in lines[1:] if ln.strip()]
    if not body:
        raise PlotsError(f"{path}: no data rows")
    data = np.empty((len(body), len(header)))
    for i, ln in enumerate(body):
        parts = ln.split(",")
        if len(parts) != len(header):
            raise PlotsError(f"{path}: row {i + 2} has {len(parts)} fields, expected {len(header)}")
        try:
            data[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise PlotsError(f"{path}: row {i + 2}: {exc}") from exc
    return {c: data[:, j].copy() for j, c in enumerate(header)}


@dataclass(frozen=True)
class RunData:
    """One run directory: metadata plus lazily-loadable series files."""

    directory: Path
    metadata: dict

    @property
    def name(self) -> str:
        return self.metadata.get("preset") or self.metadata["name"]

    @property
    def figure(self) -> dict | None:
        return self.metadata.get("figure")

    def series(self) -> list[tuple[str, dict[str, np.ndarray]]]:
        out = []
        for entry in self.metadata["series"]:
            out.append(
                (entry["label"], read_series_csv(self.directory / entry["file"]))
            )
        return out

    def analytic(self) -> dict[str, np.ndarray] | None:
        info = self.metadata.get("analytic")
        if not info:
            return None
        return read_series_csv(self.directory / info["file"], analytic=True)

    def short_labels(self) -> list[str]:
        """Labels reduced to the quantity that actually varies in the sweep."""
        key = (self.figure or {}).get("label_by")
        if key:
            return [f"{key}={e[key]:g}" for e in self.metadata["series"]]
        return [e["label"] for e in self.metadata["series"]]


def read_run(run_dir: str | Path) -> RunData:
    """Load a run directory written by the simulation CLI."""
    run_dir = Path(run_dir)
    meta_path = run_dir / "metadata.json"
    if not meta_path.exists():
        raise PlotsError(f"{run_dir}: no metadata.json (not a run directory)")
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise PlotsError(f"{meta_path}: invalid JSON: {exc}") from exc
    for key in ("name", "series"):
        if key not in meta:
            raise PlotsError(f"{meta_path}: missing key {key!r}")
    for entry in meta["series"]:
        f = run_dir / entry["file"]
        if not f.exists():
            raise PlotsError(f"{run_dir}: series file {entry['file']} is missing")
    return RunData(directory=run_dir, metadata=meta)
