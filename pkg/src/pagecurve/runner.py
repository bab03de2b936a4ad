"""Scenario execution: sweeps, observable series, CSV/JSON emission.

A scenario is a cartesian sweep over (M, N, g) at fixed hoppings and one
time grid.  Every (M, N, g) combination produces one CSV of observable
series; a run directory additionally holds ``metadata.json`` with everything
needed to reproduce the run, plus the matching analytic universal-curve CSV
when requested.  CSV bodies are deterministic: fixed column order, 12
significant digits, comma separator, one time sample per row.
"""

from __future__ import annotations

import json
import math
import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .evolve import Propagator
from .model import ModelParams, validate_scenario
from .observables import (
    ObservableRecord,
    boundary_current,
    hilbert_bound,
    min_entropy,
    occupation_spectrum,
    renyi_entropy,
    von_neumann_entropy,
)
from .rlm import disjointness_report, tau_of_time, universal_curve

__all__ = [
    "Scenario",
    "PRESETS",
    "ScenarioError",
    "parse_scenario_file",
    "compute_records",
    "run_scenario",
    "run_oracle_check",
    "OracleCheckReport",
]

ALL_OBSERVABLES = ("entropy", "renyi", "min_entropy", "bound", "current", "env_energy")
_FMT = "{:.11e}"  # 12 significant digits


class ScenarioError(ValueError):
    """Malformed scenario definition or file."""


@dataclass(frozen=True)
class Scenario:
    """A named, fully deterministic experiment definition."""

    name: str
    M: tuple[int, ...]
    N: tuple[int, ...]
    g: tuple[float, ...]
    t_sys: float = 1.0
    t_env: float = 1.0
    t_max: float | None = None
    dt: float | None = None
    times: tuple[float, ...] | None = None
    renyi: tuple[float, ...] = (2.0,)
    observables: tuple[str, ...] = ("entropy", "renyi", "min_entropy", "bound", "current")
    analytic: bool = False
    figure: dict | None = None  # plot hints consumed by the plots package

    def __post_init__(self) -> None:
        if not self.M or not self.N or not self.g:
            raise ScenarioError("M, N and g sweeps must be non-empty")
        for name in self.observables:
            if name not in ALL_OBSERVABLES:
                raise ScenarioError(
                    f"unknown observable {name!r}; known: {ALL_OBSERVABLES}"
                )
        if self.times is None:
            if self.t_max is None or self.dt is None:
                raise ScenarioError("scenario needs either times or t_max + dt")
            if not (self.t_max > 0 and self.dt > 0):
                raise ScenarioError("t_max and dt must be positive")

    def time_grid(self) -> np.ndarray:
        if self.times is not None:
            ts = np.asarray(self.times, dtype=float)
            if np.any(np.diff(ts) < 0):
                raise ScenarioError("explicit times must be ascending")
            return ts
        n = int(math.floor(self.t_max / self.dt + 1e-9)) + 1
        return np.arange(n) * self.dt

    def combos(self) -> list[ModelParams]:
        return [
            ModelParams(M=m, N=n, g=g, t_sys=self.t_sys, t_env=self.t_env)
            for m in self.M
            for n in self.N
            for g in self.g
        ]


PRESETS: dict[str, Scenario] = {
    "fig3_m_decay": Scenario(
        name="fig3_m_decay",
        M=(25, 50, 75),
        N=(10_000,),
        g=(0.5,),
        t_env=4.0,
        t_max=1000.0,
        dt=1.0,
        analytic=True,
        figure={
            "kind": "time-series",
            "x": "time",
            "y": "m_frac",
            "ylabel": "m/M",
            "label_by": "M",
            "panels": ["linear", "log"],
        },
    ),
    "fig4_svn_vs_emitted": Scenario(
        name="fig4_svn_vs_emitted",
        M=(50,),
        N=(10_000,),
        g=(0.35, 0.5, 0.65, 0.8),
        t_env=4.0,
        t_max=2400.0,
        dt=2.0,
        analytic=True,
        figure={
            "kind": "vs-fraction",
            "x": "emitted_frac",
            "y": "S_vN_per_M",
            "ylabel": "S_vN/M",
            "analytic_y": "S_frac",
            "label_by": "g",
            "panels": ["linear", "log"],
        },
    ),
    "fig5_purity_vs_emitted": Scenario(
        name="fig5_purity_vs_emitted",
        M=(50,),
        N=(10_000,),
        g=(0.35, 0.5, 0.65, 0.8),
        t_env=4.0,
        t_max=2400.0,
        dt=2.0,
        analytic=True,
        figure={
            "kind": "vs-fraction",
            "x": "emitted_frac",
            "y": "S_q2_per_M",
            "ylabel": "S^(2)/M",
            "analytic_y": "S_q2_frac",
            "label_by": "g",
            "panels": ["linear"],
        },
    ),
    "fig6_min_entropy_vs_emitted": Scenario(
        name="fig6_min_entropy_vs_emitted",
        M=(50,),
        N=(10_000,),
        g=(0.35, 0.5, 0.65, 0.8),
        t_env=4.0,
        t_max=2400.0,
        dt=2.0,
        analytic=True,
        figure={
            "kind": "vs-fraction",
            "x": "emitted_frac",
            "y": "S_min_per_M",
            "ylabel": "S_min/M",
            "analytic_y": "S_min_frac",
            "label_by": "g",
            "panels": ["linear"],
        },
    ),
    "fig7_env_variance_vs_emitted": Scenario(
        name="fig7_env_variance_vs_emitted",
        M=(50,),
        N=(10_000,),
        g=(0.35, 0.5, 0.65, 0.8),
        t_env=4.0,
        t_max=2400.0,
        dt=4.0,
        observables=("entropy", "renyi", "min_entropy", "bound", "current", "env_energy"),
        analytic=True,
        figure={
            "kind": "vs-fraction",
            "x": "emitted_frac",
            "y": "dHenv2_per_M",
            "ylabel": "Var(H_env)/M",
            "analytic_y": "var_frac",
            "label_by": "g",
            "panels": ["linear"],
        },
    ),
    "fig9_finite_size": Scenario(
        name="fig9_finite_size",
        M=(50,),
        N=(75, 200, 10_000),
        g=(0.65,),
        t_env=1.0,
        t_max=400.0,
        dt=1.0,
        figure={
            "kind": "finite-size",
            "x": "time",
            "y": "S_vN",
            "ylabel": "S_vN",
            "label_by": "N",
            "panels": ["linear"],
        },
    ),
}


# -- scenario files ---------------------------------------------------------

_LIST_KEYS = {"M", "N", "g", "renyi", "observables", "times"}
_SCALAR_KEYS = {"name", "t_sys", "t_env", "t_max", "dt", "analytic"}


def _parse_value(key: str, raw: str):
    items = [s.strip() for s in raw.split(",") if s.strip() != ""]
    if key == "name":
        return raw.strip()
    if key == "observables":
        return tuple(items)
    if key == "analytic":
        if raw.strip().lower() not in ("true", "false"):
            raise ScenarioError(f"analytic must be true or false, got {raw.strip()!r}")
        return raw.strip().lower() == "true"
    if key in ("M", "N"):
        return tuple(int(s) for s in items)
    if key == "renyi":
        return tuple(math.inf if s.lower() in ("inf", "infinity") else float(s) for s in items)
    if key in ("g", "times"):
        return tuple(float(s) for s in items)
    return float(raw.strip())


def parse_scenario_file(path: str | Path) -> Scenario:
    """Parse the flat key-value scenario grammar.

    One ``key = value`` per line; lists comma-separated; ``#`` starts a
    comment.  Keys: name, M, N, g, t_sys, t_env, t_max, dt, times, renyi,
    observables, analytic.
    """
    path = Path(path)
    values: dict[str, object] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _LIST_KEYS | _SCALAR_KEYS:
            raise ScenarioError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _parse_value(key, raw)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    values.setdefault("name", path.stem)
    missing = {"M", "N", "g"} - values.keys()
    if missing:
        raise ScenarioError(f"{path}: missing required keys {sorted(missing)}")
    return Scenario(**values)  # type: ignore[arg-type]


# -- computation ------------------------------------------------------------

def compute_records(
    params: ModelParams,
    times: np.ndarray,
    renyi: tuple[float, ...] = (2.0,),
    with_env_energy: bool = False,
    propagator: Propagator | None = None,
) -> list[ObservableRecord]:
    """Observable series on a time grid for one parameter combination.

    Entropies come from the system-block occupation spectrum; environment
    energetics (optional) use the propagator's O(L M^2) fast route.
    """
    prop = propagator if propagator is not None else Propagator(params)
    qs = tuple(q for q in renyi if q != math.inf)
    out: list[ObservableRecord] = []
    for t in times:
        frame = prop.system_frame(t)
        spec = occupation_spectrum(frame)
        m = float(spec.nu.sum())
        henv = dhenv2 = None
        if with_env_energy:
            henv, dhenv2 = prop.env_energy(t)
        out.append(
            ObservableRecord(
                time=float(t),
                m=m,
                S_vN=von_neumann_entropy(spec),
                S_q={q: renyi_entropy(spec, q) for q in qs},
                S_min=min_entropy(spec),
                bound=hilbert_bound(min(max(m, 0.0), float(params.M)), params.M),
                Henv_mean=henv,
                dHenv2=dhenv2,
            )
        )
    return out


def _series_columns(M: int, renyi, with_env: bool, with_current: bool) -> list[str]:
    cols = ["time", "m", "m_frac", "emitted_frac"]
    if with_current:
        cols.append("current")
    cols += ["S_vN", "S_vN_per_M"]
    for q in renyi:
        if q != math.inf:
            cols += [f"S_q{q:g}", f"S_q{q:g}_per_M"]
    cols += ["S_min", "S_min_per_M", "bound", "bound_per_M"]
    if with_env:
        cols += ["Henv_mean", "dHenv2", "dHenv2_per_M"]
    return cols


def _series_rows(
    records: list[ObservableRecord], M: int, renyi, with_env: bool, dt: float | None
) -> tuple[list[str], list[list[float]]]:
    with_current = dt is not None and len(records) >= 3
    cols = _series_columns(M, renyi, with_env, with_current)
    ms = np.array([r.m for r in records])
    current = boundary_current(ms, dt) if with_current else None
    rows = []
    for i, r in enumerate(records):
        vals = {
            "time": r.time,
            "m": r.m,
            "m_frac": r.m / M,
            "emitted_frac": 1.0 - r.m / M,
            "S_vN": r.S_vN,
            "S_vN_per_M": r.S_vN / M,
            "S_min": r.S_min,
            "S_min_per_M": r.S_min / M,
            "bound": r.bound,
            "bound_per_M": r.bound / M,
        }
        if with_current:
            vals["current"] = float(current[i])
        for q, v in r.S_q.items():
            vals[f"S_q{q:g}"] = v
            vals[f"S_q{q:g}_per_M"] = v / M
        if with_env:
            vals["Henv_mean"] = r.Henv_mean
            vals["dHenv2"] = r.dHenv2
            vals["dHenv2_per_M"] = r.dHenv2 / M
        rows.append([vals[c] for c in cols])
    return cols, rows


def _write_csv(path: Path, cols: list[str], rows: list[list[float]]) -> None:
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(_FMT.format(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _analytic_grid(tau_max: float, n: int = 400) -> np.ndarray:
    tau_max = max(tau_max, 1.0)
    lin = np.linspace(0.0, min(3.0, tau_max), n // 2)
    if tau_max <= 3.0:
        return lin
    geo = np.geomspace(3.0, tau_max, n - n // 2 + 1)[1:]
    return np.concatenate([lin, geo])


def _write_analytic_csv(path: Path, taus: np.ndarray, renyi, convention: str) -> None:
    qs = tuple(q for q in renyi if q != math.inf)
    curve = universal_curve(taus, qs=qs, convention=convention)
    cols = ["tau", "m_frac", "emitted_frac", "S_frac"]
    for q in qs:
        cols.append(f"S_q{q:g}_frac")
    cols += ["S_min_frac", "var_frac"]
    rows = []
    for i in range(len(curve.tau)):
        row = [curve.tau[i], curve.m_frac[i], curve.emitted_frac[i], curve.S_frac[i]]
        row += [curve.Sq_frac[q][i] for q in qs]
        row += [curve.Smin_frac[i], curve.var_frac[i]]
        rows.append(row)
    _write_csv(path, cols, rows)


def run_scenario(
    scenario: Scenario,
    out_dir: str | Path,
    threads: int = 1,
    preset_name: str | None = None,
    convention: str = "standard",
) -> Path:
    """Execute a scenario and write one CSV per (M, N, g) combination.

    Returns the run directory ``out_dir / scenario.name`` containing the
    CSVs, ``metadata.json``, and (if requested) ``analytic.csv``.
    Re-running the same scenario yields byte-identical CSV bodies.
    """
    t0 = _time.perf_counter()
    run_dir = Path(out_dir) / scenario.name
    run_dir.mkdir(parents=True, exist_ok=True)
    times = scenario.time_grid()
    combos = scenario.combos()
    with_env = "env_energy" in scenario.observables

    def one(params: ModelParams):
        records = compute_records(
            params, times, renyi=scenario.renyi, with_env_energy=with_env
        )
        return params, records

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, combos))
    else:
        results = [one(p) for p in combos]

    series_meta = []
    warnings: list[str] = []
    for params, records in results:
        fname = f"M{params.M}_N{params.N}_g{params.g:g}.csv"
        cols, rows = _series_rows(
            records, params.M, scenario.renyi, with_env, scenario.dt
        )
        _write_csv(run_dir / fname, cols, rows)
        diag = validate_scenario(params, t_max=float(times[-1]) if len(times) else None)
        warnings.extend(f"{fname}: {w}" for w in diag.warnings)
        series_meta.append(
            {
                "file": fname,
                "M": params.M,
                "N": params.N,
                "g": params.g,
                "label": f"M={params.M}, N={params.N}, g={params.g:g}",
                "t_return_estimate": diag.t_return,
            }
        )

    analytic_meta = None
    if scenario.analytic:
        tau_max = max(
            tau_of_time(float(times[-1]), p) for p in combos
        ) if len(times) else 1.0
        _write_analytic_csv(
            run_dir / "analytic.csv", _analytic_grid(tau_max), scenario.renyi, convention
        )
        analytic_meta = {"file": "analytic.csv", "convention": convention}

    rep = disjointness_report(combos[0])
    meta = {
        "name": scenario.name,
        "preset": preset_name,
        "tool_version": __version__,
        "params": {
            "M": list(scenario.M),
            "N": list(scenario.N),
            "g": list(scenario.g),
            "t_sys": scenario.t_sys,
            "t_env": scenario.t_env,
        },
        "grid": {
            "t_max": scenario.t_max,
            "dt": scenario.dt,
            "times_explicit": list(scenario.times) if scenario.times else None,
            "n_samples": int(len(times)),
        },
        "renyi_orders": ["inf" if q == math.inf else q for q in scenario.renyi],
        "observables": list(scenario.observables),
        "series": series_meta,
        "analytic": analytic_meta,
        "figure": scenario.figure,
        "disjointness": {
            "min_ratio": float(rep.ratio.min()),
            "violating_fraction": rep.violating_fraction,
            "predicted_edge_fraction": rep.predicted_edge_fraction,
        },
        "warnings": warnings,
        "wall_time_s": round(_time.perf_counter() - t0, 3),
    }
    (run_dir / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")
    return run_dir


# -- oracle check -----------------------------------------------------------

@dataclass
class OracleCheckReport:
    """Max deviation per observable between Gaussian and Fock routes."""

    instances: int = 0
    max_dev: dict[str, float] = field(default_factory=dict)
    tolerance: float = 1e-8

    @property
    def ok(self) -> bool:
        return all(v <= self.tolerance for v in self.max_dev.values())

    def summary(self) -> str:
        lines = [f"oracle equivalence over {self.instances} instances:"]
        for k, v in sorted(self.max_dev.items()):
            flag = "ok" if v <= self.tolerance else "FAIL"
            lines.append(f"  {k:12s} max |dev| = {v:.3e}  [{flag}]")
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'} (tolerance {self.tolerance:g})")
        return "\n".join(lines)


def run_oracle_check(
    max_l: int = 14,
    corrupt_signs: bool = False,
    n_times: int = 20,
    tolerance: float = 1e-8,
) -> OracleCheckReport:
    """Gaussian-vs-Fock equivalence over small instances.

    For each system size M in {1, 2, 3} the environment is chosen to fill
    the budget ``max_l``; couplings and environment hoppings span the
    production range.  ``corrupt_signs`` drops the fermionic parity string in
    the oracle's correlation evaluation (negative control: the check must
    then fail).
    """
    from math import inf

    from .model import build_hamiltonian, environment_block, initial_occupation
    from .observables import (
        env_energy_mean_and_variance,
        particle_number,
    )
    from .oracle import (
        SectorEvolution,
        build_sector_hamiltonian,
        correlation_matrix,
        initial_sector_state,
        reduced_density_entropies,
        sector_operator,
    )
    from .spectral import eigendecompose
    from .evolve import propagate

    report = OracleCheckReport(tolerance=tolerance)
    devs: dict[str, float] = {
        k: 0.0
        for k in ("S_vN", "S_q2", "S_min", "m", "Henv_mean", "dHenv2", "corr")
    }
    for M in (1, 2, 3):
        N = max_l - M
        if N < 1:
            continue
        for g in (0.35, 0.8):
            for t_env in (1.0, 4.0):
                params = ModelParams(M=M, N=N, g=g, t_env=t_env)
                spec = eigendecompose(build_hamiltonian(params))
                occ = initial_occupation(params)
                h_env = environment_block(params)
                A_env = np.zeros((params.L, params.L))
                for i in range(M, params.L - 1):
                    A_env[i, i + 1] = A_env[i + 1, i] = t_env
                Hs = build_sector_hamiltonian(params, M)
                ev = SectorEvolution(Hs)
                psi0 = initial_sector_state(params)
                env_op = sector_operator(psi0.basis, A_env)
                n_sys = _sys_counts(psi0.basis, M)
                times = np.linspace(0.0, 10.0 * M / g**2, n_times)
                for it, t in enumerate(times):
                    amps = ev.evolve(psi0.amplitudes, t)
                    psi = type(psi0)(basis=psi0.basis, amplitudes=amps)
                    s_vn, sq = reduced_density_entropies(
                        psi, list(range(M)), qs=(2.0, inf)
                    )
                    frame = propagate(spec, occ, t, n_system=M)
                    sp = occupation_spectrum(frame)
                    mean_g, var_g = env_energy_mean_and_variance(frame, h_env)
                    phi = env_op @ amps
                    mean_o = float(np.vdot(amps, phi).real)
                    var_o = float(np.vdot(phi, phi).real) - mean_o**2
                    devs["S_vN"] = max(devs["S_vN"], abs(von_neumann_entropy(sp) - s_vn))
                    devs["S_q2"] = max(devs["S_q2"], abs(renyi_entropy(sp, 2.0) - sq[2.0]))
                    devs["S_min"] = max(devs["S_min"], abs(min_entropy(sp) - sq[inf]))
                    devs["m"] = max(
                        devs["m"],
                        abs(particle_number(frame) - float(np.sum(np.abs(amps) ** 2 * n_sys))),
                    )
                    devs["Henv_mean"] = max(devs["Henv_mean"], abs(mean_g - mean_o))
                    devs["dHenv2"] = max(devs["dHenv2"], abs(var_g - var_o))
                    if it % 5 == 0:
                        C_o = correlation_matrix(psi, drop_parity=corrupt_signs)
                        W = np.vstack([frame.X, frame.Y])
                        devs["corr"] = max(
                            devs["corr"], float(np.abs(W @ W.conj().T - C_o).max())
                        )
                report.instances += 1
    report.max_dev = devs
    return report


def _sys_counts(basis, M: int) -> np.ndarray:
    mask = (1 << M) - 1
    return np.array([bin(int(s) & mask).count("1") for s in basis.states], dtype=float)
