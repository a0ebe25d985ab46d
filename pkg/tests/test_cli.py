import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from gdiscord import cli
from gdiscord.states import ghz

DATA = Path(__file__).parent / "data"
HEADER = "v,i_q,j_g,delta_g,j_asym,delta_asym,t,theta,regime,entangled"
EPR_SWEEP = ["sweep", "--state", "epr", "--noise", "uncorrelated", "--v-start", "0", "--v-stop", "1.5", "--v-step", "0.25"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


class TestReport:
    def test_epr(self, capsys):
        obj = run_json(capsys, "report", "--state", "epr", "--r", "1")
        assert obj["j_g"] == pytest.approx(np.log2(np.cosh(2)), abs=1e-9)
        assert obj["regime"] == "homodyne"
        assert obj["t"] == [1.0, 1.0]
        assert obj["entangled"] is True
        assert set(obj) == {"i_q", "j_g", "delta_g", "j_asym", "delta_asym", "theta", "t", "regime", "entangled"}

    def test_vacuum_file(self, capsys, tmp_path):
        path = write_json(tmp_path / "vacuum2.json", {"n": 2, "matrix": np.eye(4).tolist()})
        obj = run_json(capsys, "report", "--file", path)
        for key in ("i_q", "j_g", "delta_g", "j_asym", "delta_asym"):
            assert obj[key] == pytest.approx(0.0, abs=1e-12)
        assert obj["entangled"] == "boundary"

    def test_ghz(self, capsys):
        obj = run_json(capsys, "report", "--state", "ghz", "--a", "2", "--symmetric")
        assert obj["i_q"] == pytest.approx(4.1323, abs=1e-4)
        assert obj["j_asym"] is None

    def test_guard_warning_on_stderr(self, capsys, tmp_path):
        m = np.diag([10.0, 1.0, 10.0, 1.0])
        m[0, 2] = m[2, 0] = 9.0
        path = write_json(tmp_path / "classical.json", {"n": 2, "matrix": m.tolist()})
        code, out, err = run(capsys, "report", "--file", path)
        assert code == 0
        assert "heterodyne" in err
        json.loads(out)


class TestEntropyAndSeparability:
    def test_entropy(self, capsys):
        obj = run_json(capsys, "entropy", "--state", "ghz")
        assert obj["n"] == 3
        assert obj["entropy"] == pytest.approx(0.0, abs=1e-9)
        assert obj["quantum_mi"] == pytest.approx(4.1323, abs=1e-4)
        assert obj["marginal_entropies"] == pytest.approx([1.3774] * 3, abs=1e-4)

    def test_separability_epr(self, capsys):
        obj = run_json(capsys, "separability", "--state", "epr", "--noise", "uncorrelated", "--v", "0.5")
        assert obj["verdict"]["entangled"] is True
        assert obj["duan"]["method"] == "duan"
        assert [c["cut"] for c in obj["ppt"]] == [[0], [1]]

    def test_separability_boundary(self, capsys):
        obj = run_json(capsys, "separability", "--state", "vacuum2", "--noise", "correlated", "--v", "1")
        assert obj["verdict"]["entangled"] == "boundary"


class TestSweep:
    def test_golden_file(self, capsys, tmp_path):
        out = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, *EPR_SWEEP, "-o", str(out))
        assert code == 0
        assert out.read_bytes() == (DATA / "golden_epr_uncorrelated.csv").read_bytes()

    def test_repeatable_and_parallel(self, capsys, tmp_path, monkeypatch):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, *EPR_SWEEP, "-o", str(a))
        monkeypatch.setenv("GDISCORD_JOBS", "2")
        run(capsys, *EPR_SWEEP, "-o", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_header_and_sidecar(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        summary = run_json(capsys, *EPR_SWEEP[:-3], "3", "--v-step", "0.25", "-o", str(out))
        lines = out.read_text().splitlines()
        assert lines[0] == HEADER
        assert len(lines) == 14
        side = json.loads((tmp_path / "s.thresholds.json").read_text())
        assert side["separability_boundary_v"] == pytest.approx(1 - np.exp(-2), abs=1e-4)
        assert side["regime_switch_v"] == pytest.approx(side["homodyne_criterion_v"], abs=1e-3)
        assert summary["sidecar"].endswith("s.thresholds.json")

    def test_regime_column_agrees_with_sidecar(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        run(capsys, *EPR_SWEEP, "-o", str(out))
        side = json.loads((tmp_path / "s.thresholds.json").read_text())
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        flip = next(float(r[0]) for r in rows if r[8] != "homodyne")
        assert flip - 0.25 <= side["regime_switch_v"] <= flip

    def test_vacuum2_correlated_never_entangled(self, capsys, tmp_path):
        out = tmp_path / "vac.csv"
        code, _, _ = run(
            capsys, "sweep", "--state", "vacuum2", "--noise", "correlated",
            "--v-start", "0", "--v-stop", "3", "--v-step", "0.5", "-o", str(out),
        )
        assert code == 0
        column = [line.split(",")[-1] for line in out.read_text().splitlines()[1:]]
        assert len(column) == 7
        assert "true" not in column
        assert set(column) <= {"false", "boundary"}

    def test_three_modes_empty_asymmetric_columns(self, capsys, tmp_path):
        out = tmp_path / "ghz.csv"
        run(
            capsys, "sweep", "--state", "ghz", "--noise", "uncorrelated", "--symmetric",
            "--v-start", "0", "--v-stop", "0.5", "--v-step", "0.5", "-o", str(out),
        )
        row = out.read_text().splitlines()[1].split(",")
        assert row[4] == "" and row[5] == ""
        assert row[6] == "1;1;1"

    @pytest.mark.slow
    def test_ghz_multiplicative_threshold(self, capsys, tmp_path):
        out = tmp_path / "ghz.csv"
        code, _, _ = run(
            capsys, "sweep", "--state", "ghz", "--a", "2", "--noise", "multiplicative",
            "--v-start", "1", "--v-stop", "6", "--v-step", "0.5", "-o", str(out),
        )
        assert code == 0
        side = json.loads((tmp_path / "ghz.thresholds.json").read_text())
        assert side["regime_switch_v"] == pytest.approx(3.082, abs=1e-3)

    def test_missing_flag(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep", "--state", "epr", "--noise", "uncorrelated", "-o", str(tmp_path / "x.csv"))
        assert code == 2
        assert "--v-start" in err

    def test_inadmissible_noise_range(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "sweep", "--state", "epr", "--noise", "multiplicative",
            "--v-start", "0", "--v-stop", "1", "--v-step", "0.5", "-o", str(tmp_path / "x.csv"),
        )
        assert code == 2

    def test_unwritable(self, capsys, tmp_path):
        code, _, _ = run(capsys, *EPR_SWEEP, "-o", str(tmp_path / "missing" / "x.csv"))
        assert code == 2


class TestValidate:
    def test_epr_homodyne(self, capsys):
        obj = run_json(capsys, "validate", "--state", "epr", "--plan", "homodyne", "--m", "1000000")
        assert obj["pass"] is True
        assert obj["rng"] == "PCG64" and obj["seed"] == 0

    def test_vacuum(self, capsys):
        obj = run_json(capsys, "validate", "--state", "vacuum2", "--plan", "heterodyne", "--m", "100000")
        assert obj["pass"] is True
        assert abs(obj["estimated_mi"]) < 0.01

    def test_plan_file(self, capsys, tmp_path):
        plan = write_json(tmp_path / "plan.json", {"params": [{"theta": 0.3, "t": 0.7}] * 3})
        obj = run_json(capsys, "validate", "--state", "ghz", "--plan", plan, "--m", "200000", "--seed", "9")
        assert obj["plan"]["params"][0] == {"theta": 0.3, "t": 0.7}
        assert obj["seed"] == 9

    def test_plan_mode_mismatch(self, capsys, tmp_path):
        plan = write_json(tmp_path / "plan.json", {"params": [{"theta": 0.0, "t": 1.0}]})
        code, _, _ = run(capsys, "validate", "--state", "epr", "--plan", plan)
        assert code == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        def failing(*args, **kwargs):
            return {"pass": False, "z": 9.0}

        monkeypatch.setattr(cli, "validate", failing)
        code, _, err = run(capsys, "validate", "--state", "epr", "--plan", "homodyne")
        assert code == 4
        assert "standard errors" in err


class TestErrors:
    def test_corrupted_file_is_unphysical(self, capsys, tmp_path):
        m = ghz(2).matrix.copy()
        m[0, 0] = m[2, 2] = 0.3
        path = write_json(tmp_path / "bad.json", {"n": 3, "matrix": m.tolist()})
        for cmd in ("report", "validate", "entropy"):
            code, _, err = run(capsys, cmd, "--file", path)
            assert code == 3
            assert "unphysical" in err

    def test_unknown_state(self, capsys):
        code, _, _ = run(capsys, "report", "--state", "bell")
        assert code == 2

    def test_no_state(self, capsys):
        assert run(capsys, "report")[0] == 2

    def test_state_and_file(self, capsys, tmp_path):
        path = write_json(tmp_path / "v.json", {"n": 1, "matrix": [[1, 0], [0, 1]]})
        assert run(capsys, "entropy", "--state", "epr", "--file", path)[0] == 2

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        path.write_text("{not json")
        assert run(capsys, "entropy", "--file", str(path))[0] == 2

    def test_bad_noise_value(self, capsys):
        assert run(capsys, "report", "--state", "epr", "--noise", "multiplicative", "--v", "0.5")[0] == 2

    def test_v_without_noise(self, capsys):
        assert run(capsys, "entropy", "--state", "epr", "--v", "1")[0] == 2

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2


class TestConfig:
    def test_config_and_override(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"state": "epr", "r": 0.5, "noise": "uncorrelated", "v": 0.0})
        base = run_json(capsys, "entropy", "--config", cfg)
        override = run_json(capsys, "entropy", "--config", cfg, "--r", "1")
        direct = run_json(capsys, "entropy", "--state", "epr", "--r", "0.5")
        assert base["quantum_mi"] == direct["quantum_mi"]
        assert override["quantum_mi"] == pytest.approx(4.6738, abs=1e-4)

    def test_nested_options(self, capsys, tmp_path):
        cfg = write_json(
            tmp_path / "c.json",
            {"state": "epr", "options": {"theta_points": 4, "t_points": 3, "refine_starts": 2}},
        )
        obj = run_json(capsys, "report", "--config", cfg)
        assert obj["j_g"] == pytest.approx(np.log2(np.cosh(2)), abs=1e-9)

    def test_bad_option_value(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"state": "epr", "options": {"t_points": 1}})
        assert run(capsys, "report", "--config", cfg)[0] == 2

    def test_unknown_key(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"state": "epr", "colour": "blue"})
        assert run(capsys, "report", "--config", cfg)[0] == 2

    def test_not_an_object(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", [1, 2])
        assert run(capsys, "report", "--config", cfg)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gdiscord", "entropy", "--state", "epr"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["quantum_mi"] == pytest.approx(4.6738, abs=1e-4)
