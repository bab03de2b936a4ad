"""Figure construction from run data.

Three layouts cover all the simulation presets:

* ``time-series``   -- observable vs time, one line per sweep point,
  optionally duplicated as a logarithmic bottom panel;
* ``vs-fraction``   -- observable vs emitted fraction with the analytic
  universal curve dashed on top;
* ``finite-size``   -- entropy vs time for different environment sizes.

Rendering is deterministic for fixed inputs (Agg backend, fixed geometry).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import PlotsError, RunData, read_run, read_series_csv

__all__ = ["FigureSpec", "spec_from_run", "build_figure", "render", "render_all"]

KINDS = ("time-series", "vs-fraction", "finite-size")
LOG_CLIP = 1e-12  # avoid log-of-zero at the S = 0 start of every run


@dataclass(frozen=True)
class FigureSpec:
    """Everything needed to draw one figure."""

    kind: str
    series_files: tuple[Path, ...]
    labels: tuple[str, ...]
    x: str
    y: str
    out: Path
    ylabel: str | None = None
    analytic_file: Path | None = None
    analytic_y: str | None = None
    panels: tuple[str, ...] = ("linear",)
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PlotsError(f"unknown figure kind {self.kind!r}; known: {KINDS}")
        for p in self.panels:
            if p not in ("linear", "log"):
                raise PlotsError(f"unknown panel scale {p!r}")
        missing = [str(f) for f in self.series_files if not Path(f).exists()]
        if self.analytic_file is not None and not Path(self.analytic_file).exists():
            missing.append(str(self.analytic_file))
        if missing:
            raise PlotsError(f"referenced files do not exist: {missing}")
        if len(self.labels) != len(self.series_files):
            raise PlotsError("labels and series_files must have equal length")


def spec_from_run(run: RunData, out_dir: Path | None = None, fmt: str = "png") -> FigureSpec:
    """Build the FigureSpec a run's metadata asks for.

    Raises :class:`PlotsError` when the run carries no figure hints
    (custom scenarios are data-only).
    """
    hints = run.figure
    if not hints:
        raise PlotsError(f"{run.directory}: run has no figure hints")
    out_dir = Path(out_dir) if out_dir is not None else run.directory.parent
    analytic_meta = run.metadata.get("analytic")
    analytic_file = (
        run.directory / analytic_meta["file"]
        if (analytic_meta and hints.get("analytic_y"))
        else None
    )
    return FigureSpec(
        kind=hints["kind"],
        series_files=tuple(run.directory / e["file"] for e in run.metadata["series"]),
        labels=tuple(run.short_labels()),
        x=hints["x"],
        y=hints["y"],
        ylabel=hints.get("ylabel"),
        analytic_file=analytic_file,
        analytic_y=hints.get("analytic_y"),
        panels=tuple(hints.get("panels", ["linear"])),
        title=run.name,
        out=out_dir / f"{run.name}.{fmt}",
    )


def _require_column(data: dict[str, np.ndarray], col: str, origin) -> np.ndarray:
    if col not in data:
        raise PlotsError(f"{origin}: required column {col!r} is missing")
    return data[col]


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure (separated from file I/O for tests)."""
    series = []
    for f, label in zip(spec.series_files, spec.labels):
        data = read_series_csv(f)
        x = _require_column(data, spec.x, f)
        y = _require_column(data, spec.y, f)
        series.append((label, x, y))
    analytic = None
    if spec.analytic_file is not None:
        data = read_series_csv(spec.analytic_file, analytic=True)
        ax_x = "emitted_frac" if spec.x != "tau" else "tau"
        analytic = (
            _require_column(data, ax_x, spec.analytic_file),
            _require_column(data, spec.analytic_y, spec.analytic_file),
        )

    n = len(spec.panels)
    fig, axes = plt.subplots(n, 1, figsize=(6.4, 3.2 * n), sharex=True, squeeze=False)
    for ax, scale in zip(axes[:, 0], spec.panels):
        for label, x, y in series:
            yy = np.maximum(y, LOG_CLIP) if scale == "log" else y
            ax.plot(x, yy, linewidth=1.2, label=label)
        if analytic is not None:
            ya = np.maximum(analytic[1], LOG_CLIP) if scale == "log" else analytic[1]
            ax.plot(
                analytic[0], ya, linestyle="--", color="black", linewidth=1.2,
                label="analytic (RLM)",
            )
        if scale == "log":
            ax.set_yscale("log")
        ax.set_ylabel(spec.ylabel or spec.y)
        ax.grid(alpha=0.3)
    axes[0, 0].legend(frameon=False, fontsize=8)
    if spec.title:
        axes[0, 0].set_title(spec.title)
    xlabel = {"time": "t", "emitted_frac": "1 - m/M", "tau": "tau"}.get(spec.x, spec.x)
    axes[-1, 0].set_xlabel(xlabel)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Write the figure to ``spec.out`` and return the path."""
    fig = build_figure(spec)
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return spec.out


def render_all(root: str | Path, fmt: str = "png") -> list[Path]:
    """Render every run found under ``root`` that carries figure hints.

    ``root`` may be a single run directory or a directory of runs (the
    simulation CLI's ``--out``).  Returns the written image paths; runs
    without figure hints are skipped with a notice.
    """
    root = Path(root)
    if not root.is_dir():
        raise PlotsError(f"{root}: not a directory")
    if (root / "metadata.json").exists():
        run_dirs = [root]
    else:
        run_dirs = sorted(d for d in root.iterdir() if (d / "metadata.json").exists())
    if not run_dirs:
        raise PlotsError(f"{root}: no run directories (metadata.json) found")
    written: list[Path] = []
    for d in run_dirs:
        run = read_run(d)
        if not run.figure:
            print(f"skipping {d.name}: no figure hints in metadata")
            continue
        out = render(spec_from_run(run, out_dir=root, fmt=fmt))
        print(f"wrote {out}")
        written.append(out)
    return written
