import csv
import json
import shutil
import subprocess

import pytest

from entropic_witness.cli import main
from entropic_witness.reservoir import TRAJECTORY_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestState:
    def test_singlet(self, capsys):
        code, out, _ = run(capsys, "state", "--v=-1,-1,-1")
        assert code == 0
        rep = json.loads(out)
        assert rep["concurrence"] == pytest.approx(1.0)
        assert rep["te"] == pytest.approx(0.0, abs=1e-9)

    def test_example_state(self, capsys):
        code, out, _ = run(capsys, "state", "--r=0,0,0.25", "--s=0,0,0.25", "--v=0.95,-0.25,0.30")
        rep = json.loads(out)
        assert code == 0
        assert rep["cond_entropy"] < 0
        assert rep["chsh"] <= 1

    def test_unphysical(self, capsys):
        code, _, err = run(capsys, "state", "--v=1,1,1")
        assert code == 2
        assert "minimum eigenvalue -0.5" in err

    def test_json_input(self, capsys, tmp_path):
        path = tmp_path / "state.json"
        path.write_text(json.dumps({"r": [0, 0, 0], "s": [0, 0, 0], "v": [-1, -1, -1]}))
        code, out, _ = run(capsys, "state", "--json", str(path))
        assert code == 0 and json.loads(out)["bb"] == pytest.approx(0.0, abs=1e-9)

    def test_malformed(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(capsys, "state", "--json", str(path))[0] == 1
        assert run(capsys, "state", "--v=1,2")[0] == 1
        assert run(capsys, "state", "--v=2,0,0")[0] == 1


class TestMonteCarlo:
    def test_too_few(self, capsys):
        code, _, err = run(capsys, "montecarlo", "--n", "1000")
        assert code == 1 and "minimum" in err

    def test_small_run(self, capsys, tmp_path):
        out = tmp_path / "mc.json"
        code, _, err = run(capsys, "montecarlo", "--n", "20000", "--seed", "3", "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["n_samples"] == 20000 and data["seed"] == 3
        assert "montecarlo: 20000/20000" in err


class TestPcrit:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "pcrit")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "estimator,status,p_c,c_low,c_high"
        assert [line.split(",")[0] for line in lines[1:]] == ["TE", "ME", "FE"]
        assert float(lines[1].split(",")[2]) == pytest.approx(0.9101, abs=1e-3)

    def test_never(self, capsys):
        code, out, _ = run(capsys, "pcrit", "--purity", "0", "--estimator", "te", "--format", "json")
        assert code == 0
        assert json.loads(out)["rows"][0]["status"] == "never"


class TestEvolve:
    def test_lorentzian(self, capsys, tmp_path):
        out = tmp_path / "traj.csv"
        code, _, _ = run(
            capsys, "evolve", "--model", "lorentzian", "--lambda", "0.1", "--family", "phi",
            "--t-max", "30", "--out", str(out),
        )
        assert code == 0
        with out.open() as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == TRAJECTORY_COLUMNS
        assert len(rows) == 15002
        side = json.loads(out.with_suffix(".json").read_text())
        assert side["frame"] == "rotating"
        lo, hi = side["witness"]["te"]["region"]
        assert lo == pytest.approx(0.8031, abs=2e-3) and hi == pytest.approx(1.0)

    def test_ohmic(self, capsys, tmp_path):
        out = tmp_path / "ohm.csv"
        code, _, _ = run(capsys, "evolve", "--s", "1", "--t-max", "2", "--out", str(out))
        assert code == 0
        assert json.loads(out.with_suffix(".json").read_text())["frame"] == "lab"

    def test_solver_failure(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "evolve", "--t-max", "2", "--step", "0.5", "--tol", "1e-15", "--out", str(tmp_path / "x.csv")
        )
        assert code == 3 and "diagnostics" in err

    def test_bad_model(self, capsys, tmp_path):
        assert run(capsys, "evolve", "--s", "1.5", "--out", str(tmp_path / "x.csv"))[0] == 1


class TestFigures:
    def test_unknown(self, capsys, tmp_path):
        assert run(capsys, "figures", "9z", "--outdir", str(tmp_path))[0] == 1

    @pytest.mark.parametrize("fig_id", ["2a", "1b", "3"])
    def test_generate_and_rerun(self, capsys, tmp_path, fig_id):
        assert run(capsys, "figures", fig_id, "--outdir", str(tmp_path / "a"))[0] == 0
        assert run(capsys, "figures", fig_id, "--outdir", str(tmp_path / "b"))[0] == 0
        for name in (f"fig{fig_id}.csv", f"fig{fig_id}.manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        header = (tmp_path / "a" / f"fig{fig_id}.csv").read_text().splitlines()[0]
        assert header
        manifest = json.loads((tmp_path / "a" / f"fig{fig_id}.manifest.json").read_text())
        assert manifest["figure"] == fig_id and manifest["files"] == [f"fig{fig_id}.csv"]


def test_config_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# Monte Carlo settings\nn = 10000\nseed = 5\n")
    code, out, _ = run(capsys, "--config", str(cfg), "montecarlo")
    assert code == 0
    assert json.loads(out)["seed"] == 5
    code, out, _ = run(capsys, "--config", str(cfg), "montecarlo", "--seed", "6")
    assert json.loads(out)["seed"] == 6 and json.loads(out)["n_samples"] == 10000


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("no equals sign\n")
    assert run(capsys, "--config", str(cfg), "pcrit")[0] == 1


@pytest.mark.skipif(shutil.which("eurwitness") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["eurwitness", "state", "--v=1,1,1"], capture_output=True, text=True)
    assert proc.returncode == 2
