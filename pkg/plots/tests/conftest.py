import json

import numpy as np
import pytest


def _csv(path, cols, rows):
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(f"{v:.11e}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def make_run(
    root,
    name,
    kind="time-series",
    y="S_vN",
    x="time",
    panels=("linear",),
    analytic_y=None,
    n_series=2,
    preset=None,
):
    """Write a miniature run directory in the simulation CLI's format."""
    d = root / name
    d.mkdir(parents=True)
    t = np.linspace(0.0, 10.0, 21)
    cols = [
        "time", "m", "m_frac", "emitted_frac", "current",
        "S_vN", "S_vN_per_M", "S_q2", "S_q2_per_M",
        "S_min", "S_min_per_M", "bound", "bound_per_M",
        "Henv_mean", "dHenv2", "dHenv2_per_M",
    ]
    series = []
    for i in range(n_series):
        M = 4
        m = M * np.exp(-0.1 * (i + 1) * t)
        s = (M / 2) * np.sin(np.pi * np.minimum(t / 10.0, 1.0)) ** 2
        rows = np.column_stack([
            t, m, m / M, 1 - m / M, np.gradient(m, t),
            s, s / M, 0.8 * s, 0.8 * s / M,
            0.5 * s, 0.5 * s / M, s + 0.1, (s + 0.1) / M,
            np.zeros_like(t), 0.3 * s, 0.3 * s / M,
        ])
        fname = f"M{M}_N{50 * (i + 1)}_g0.5.csv"
        _csv(d / fname, cols, rows)
        series.append({
            "file": fname, "M": M, "N": 50 * (i + 1), "g": 0.5,
            "label": f"M={M}, N={50 * (i + 1)}, g=0.5",
            "t_return_estimate": 50.0 * (i + 1),
        })
    analytic = None
    if analytic_y:
        tau = np.linspace(0.0, 6.0, 30)
        mf = np.exp(-tau / 3)
        acols = ["tau", "m_frac", "emitted_frac", "S_frac", "S_q2_frac", "S_min_frac", "var_frac"]
        arows = np.column_stack([
            tau, mf, 1 - mf, 0.5 * (1 - mf) * mf * 4,
            0.4 * (1 - mf) * mf * 4, 0.25 * (1 - mf) * mf * 4, 0.3 * (1 - mf) * mf * 4,
        ])
        _csv(d / "analytic.csv", acols, arows)
        analytic = {"file": "analytic.csv", "convention": "standard"}
    meta = {
        "name": name,
        "preset": preset,
        "tool_version": "0.1.0",
        "params": {"M": [4], "N": [50 * (i + 1) for i in range(n_series)], "g": [0.5],
                   "t_sys": 1.0, "t_env": 1.0},
        "grid": {"t_max": 10.0, "dt": 0.5, "times_explicit": None, "n_samples": len(t)},
        "renyi_orders": [2.0],
        "observables": ["entropy", "renyi", "min_entropy", "bound", "current", "env_energy"],
        "series": series,
        "analytic": analytic,
        "figure": {
            "kind": kind, "x": x, "y": y, "ylabel": y, "label_by": "N",
            "panels": list(panels), "analytic_y": analytic_y,
        },
        "disjointness": {"min_ratio": 10.0, "violating_fraction": 0.0,
                         "predicted_edge_fraction": 0.25},
        "warnings": [],
        "wall_time_s": 0.01,
    }
    (d / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")
    return d


@pytest.fixture()
def run_dir(tmp_path):
    return make_run(tmp_path, "demo_run")


@pytest.fixture()
def overlay_run_dir(tmp_path):
    return make_run(
        tmp_path,
        "overlay_run",
        kind="vs-fraction",
        x="emitted_frac",
        y="S_vN_per_M",
        panels=("linear", "log"),
        analytic_y="S_frac",
    )
