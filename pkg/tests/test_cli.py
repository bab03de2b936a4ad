import json
import math

import numpy as np
import pytest

from pagecurve.cli import main
from pagecurve.runner import (
    PRESETS,
    Scenario,
    ScenarioError,
    compute_records,
    parse_scenario_file,
    run_oracle_check,
    run_scenario,
)
from pagecurve import ModelParams, Propagator, environment_block, env_energy_mean_and_variance


SCENARIO_TEXT = """\
# tiny deterministic check scenario
name = tiny
M = 2
N = 30, 60
g = 0.5
t_env = 2.0
t_max = 12
dt = 0.5
renyi = 2, inf
observables = entropy, renyi, min_entropy, bound, current, env_energy
analytic = true
"""


@pytest.fixture()
def tiny_file(tmp_path):
    f = tmp_path / "tiny.txt"
    f.write_text(SCENARIO_TEXT)
    return f


class TestScenarioParsing:
    def test_roundtrip(self, tiny_file):
        sc = parse_scenario_file(tiny_file)
        assert sc.name == "tiny"
        assert sc.M == (2,)
        assert sc.N == (30, 60)
        assert sc.renyi == (2.0, math.inf)
        assert sc.analytic is True
        assert len(sc.time_grid()) == 25
        assert len(sc.combos()) == 2

    def test_unknown_key(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("M = 2\nN = 4\ng = 0.5\nbogus = 7\nt_max = 1\ndt = 0.5\n")
        with pytest.raises(ScenarioError, match="bogus"):
            parse_scenario_file(f)

    def test_missing_required(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("M = 2\nt_max = 1\ndt = 0.5\n")
        with pytest.raises(ScenarioError, match="missing"):
            parse_scenario_file(f)

    def test_bad_value(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("M = two\nN = 4\ng = 0.5\nt_max = 1\ndt = 0.5\n")
        with pytest.raises(ScenarioError, match="bad value"):
            parse_scenario_file(f)

    def test_duplicate_key(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("M = 2\nM = 3\nN = 4\ng = 0.5\nt_max = 1\ndt = 0.5\n")
        with pytest.raises(ScenarioError, match="duplicate"):
            parse_scenario_file(f)

    def test_needs_grid(self):
        with pytest.raises(ScenarioError, match="t_max"):
            Scenario(name="x", M=(2,), N=(4,), g=(0.5,))

    def test_unknown_observable(self):
        with pytest.raises(ScenarioError, match="unknown observable"):
            Scenario(
                name="x", M=(2,), N=(4,), g=(0.5,), t_max=1.0, dt=0.5,
                observables=("entropy", "nonsense"),
            )


class TestPresets:
    def test_expected_presets_present(self):
        expected = {
            "fig3_m_decay",
            "fig4_svn_vs_emitted",
            "fig5_purity_vs_emitted",
            "fig6_min_entropy_vs_emitted",
            "fig7_env_variance_vs_emitted",
            "fig9_finite_size",
        }
        assert expected == set(PRESETS)

    def test_presets_carry_figure_hints(self):
        for name, sc in PRESETS.items():
            assert sc.figure is not None, name
            assert sc.figure["kind"] in ("time-series", "vs-fraction", "finite-size")

    def test_paper_parameter_ranges(self):
        sc = PRESETS["fig4_svn_vs_emitted"]
        assert sc.N == (10_000,)
        assert sc.g == (0.35, 0.5, 0.65, 0.8)
        assert sc.t_env == 4.0
        fs = PRESETS["fig9_finite_size"]
        assert fs.t_env == 1.0 and fs.g == (0.65,)


class TestComputeRecords:
    def test_matches_direct_observables(self):
        p = ModelParams(M=3, N=25, g=0.6, t_env=2.0)
        prop = Propagator(p)
        recs = compute_records(
            p, np.array([0.0, 2.5, 9.0]), renyi=(2.0,), with_env_energy=True,
            propagator=prop,
        )
        h_env = environment_block(p)
        for r in recs:
            fr = prop.frame(r.time)
            mean, var = env_energy_mean_and_variance(fr, h_env)
            assert r.Henv_mean == pytest.approx(mean, abs=1e-9)
            assert r.dHenv2 == pytest.approx(var, abs=1e-9)
        assert recs[0].m == pytest.approx(3.0, abs=1e-9)
        assert recs[0].S_vN == pytest.approx(0.0, abs=1e-9)

    def test_env_energy_optional(self):
        p = ModelParams(M=2, N=10, g=0.5)
        recs = compute_records(p, np.array([0.0, 1.0]))
        assert recs[0].Henv_mean is None and recs[0].dHenv2 is None


class TestRunScenario:
    def test_outputs_and_determinism(self, tiny_file, tmp_path):
        sc = parse_scenario_file(tiny_file)
        d1 = run_scenario(sc, tmp_path / "a")
        d2 = run_scenario(sc, tmp_path / "b")
        files = sorted(f.name for f in d1.glob("*.csv"))
        assert files == ["M2_N30_g0.5.csv", "M2_N60_g0.5.csv", "analytic.csv"]
        for f in files:
            assert (d1 / f).read_bytes() == (d2 / f).read_bytes()

    def test_threaded_matches_serial(self, tiny_file, tmp_path):
        sc = parse_scenario_file(tiny_file)
        d1 = run_scenario(sc, tmp_path / "serial", threads=1)
        d2 = run_scenario(sc, tmp_path / "pool", threads=2)
        for f in sorted(d1.glob("*.csv")):
            assert f.read_bytes() == (d2 / f.name).read_bytes()

    def test_metadata_complete(self, tiny_file, tmp_path):
        sc = parse_scenario_file(tiny_file)
        d = run_scenario(sc, tmp_path, preset_name=None)
        meta = json.loads((d / "metadata.json").read_text())
        assert meta["name"] == "tiny"
        assert meta["tool_version"]
        assert meta["params"]["M"] == [2]
        assert meta["grid"]["dt"] == 0.5
        assert meta["renyi_orders"] == [2.0, "inf"]
        assert len(meta["series"]) == 2
        assert meta["analytic"]["file"] == "analytic.csv"
        assert "wall_time_s" in meta
        # finite-size warning expected: N=30 < M^2 is false here (M=2), but
        # reflection contamination is: t_max=12 vs t_ret=15 -> safe
        assert isinstance(meta["warnings"], list)

    def test_csv_format(self, tiny_file, tmp_path):
        sc = parse_scenario_file(tiny_file)
        d = run_scenario(sc, tmp_path)
        lines = (d / "M2_N30_g0.5.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[:5] == ["time", "m", "m_frac", "emitted_frac", "current"]
        assert "S_q2" in header and "dHenv2_per_M" in header
        # 12 significant digits in scientific notation
        first = lines[1].split(",")
        assert all("e" in v for v in first)
        assert len(first) == len(header)
        assert float(first[1]) == pytest.approx(2.0, abs=1e-9)

    def test_analytic_csv_columns(self, tiny_file, tmp_path):
        sc = parse_scenario_file(tiny_file)
        d = run_scenario(sc, tmp_path)
        header = (d / "analytic.csv").read_text().splitlines()[0].split(",")
        assert header == [
            "tau", "m_frac", "emitted_frac", "S_frac", "S_q2_frac",
            "S_min_frac", "var_frac",
        ]


class TestCliMain:
    def test_run_preset_with_overrides(self, tmp_path):
        rc = main([
            "run", "fig9_finite_size",
            "--N", "40,80", "--t-max", "20", "--dt", "1.0",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        meta = json.loads((tmp_path / "fig9_finite_size" / "metadata.json").read_text())
        assert meta["preset"] == "fig9_finite_size"
        assert meta["params"]["N"] == [40, 80]

    def test_run_scenario_file(self, tiny_file, tmp_path):
        rc = main(["run", str(tiny_file), "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "tiny" / "metadata.json").exists()

    def test_run_unknown_target(self, tmp_path, capsys):
        rc = main(["run", "not_a_preset", "--out", str(tmp_path)])
        assert rc == 2
        assert "neither a preset nor a file" in capsys.readouterr().err

    def test_analytic_command(self, tmp_path):
        rc = main(["analytic", "0:2:0.5", "--out", str(tmp_path)])
        assert rc == 0
        lines = (tmp_path / "analytic.csv").read_text().splitlines()
        assert len(lines) == 1 + 5  # header + 5 grid points
        assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-12)

    def test_analytic_bad_spec(self, tmp_path, capsys):
        rc = main(["analytic", "3:1:0.5", "--out", str(tmp_path)])
        assert rc == 2

    def test_oracle_check_small_and_fast(self, capsys):
        rc = main(["oracle-check", "--max-l", "4"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in out

    def test_oracle_check_negative_control(self, capsys):
        rc = main(["oracle-check", "--max-l", "6", "--negative-control"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out

    def test_presets_listing(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "fig3_m_decay" in out and "fig9_finite_size" in out


class TestOracleCheckApi:
    def test_minimal_budget_quick(self):
        import time

        t0 = time.perf_counter()
        rep = run_oracle_check(max_l=4)
        assert time.perf_counter() - t0 < 1.0
        assert rep.ok
        assert rep.instances == 12
