import json
import math
import subprocess
import sys

import pytest

from smoothq.cli import build_parser, run
from smoothq.experiments import BUNDLED_PRICES

SUBCOMMANDS = ("estimate", "variance", "population", "experiment", "ingest")


def _json(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def three(tmp_path):
    path = tmp_path / "three.csv"
    path.write_text("value\n1\n2\n3\n")
    return str(path)


def test_variance_tau_classical(capsys):
    rec = _json(capsys, ["variance", "--model", "normal:0,1", "--tau", "0.5", "--h", "0"])
    assert rec["classical_var"] == pytest.approx(math.pi / 2, rel=1e-12)
    assert rec["line_variance"] == pytest.approx(math.pi / 2, rel=1e-12)
    assert rec["regime"] == "B"


def test_variance_tau_regime_c(capsys):
    rec = _json(capsys, ["variance", "--model", "laplace:0,1", "--tau", "0.25", "--h", "1"])
    assert rec["regime"] == "C" and rec["h_star"] == pytest.approx(2.1294, abs=1e-4)
    assert rec["line_z_admissible"] is False


def test_variance_z(capsys):
    rec = _json(capsys, ["variance", "--model", "laplace:0,1", "--z", "0", "--h", "1"])
    assert rec["asym_var"] == pytest.approx(1.25) and rec["ratio"] == pytest.approx(1.25)


def test_estimate_median(capsys, three):
    rec = _json(capsys, ["estimate", "--data", three, "--z", "0", "--h", "0"])
    assert rec["q_hat"] == 2.0 and rec["n"] == 3


def test_estimate_modes(capsys, three):
    rec = _json(capsys, ["estimate", "--data", three, "--h", "0", "--plugin-tau", "0.5"])
    assert rec["estimator"] == "plugin" and rec["q_hat"] == 2.0
    rec = _json(capsys, ["estimate", "--data", three, "--h", "1", "--mean-family"])
    assert rec["estimator"] == "mean_family" and rec["q_hat"] == pytest.approx(2.0)


def test_estimate_csv_headerless(capsys, tmp_path):
    path = tmp_path / "raw.csv"
    path.write_text("0\n1\n")
    assert run(["estimate", "--data", str(path), "--z", "0", "--h", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "key,value" and "q_hat,0.5" in lines


def test_population(capsys):
    rec = _json(capsys, ["population", "--model", "normal:0,1", "--z", "-0.5", "--h", "1"])
    assert rec["q"] == pytest.approx(0.27970434472322836, abs=1e-10)
    assert abs(rec["residual"]) <= 1e-12
    assert rec["dq_dz"] < 0


def test_experiment_deterministic_bytes(capsys, tmp_path):
    cfg = tmp_path / "e1.json"
    cfg.write_text(json.dumps({"h_grid": {"start": 0, "stop": 2, "step": 0.5}}))
    outs = []
    for _ in range(2):
        assert run(["experiment", "1", "--config", str(cfg)]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert outs[0].startswith("experiment,scenario,h,estimator,statistic,value\n")


def test_experiment_workers_same_bytes(capsys):
    outs = []
    for w in ("1", "2"):
        argv = ["experiment", "3", "--n", "100", "--replications", "8", "--workers", w, "--seed", "4", "--format", "json"]
        assert run(argv) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert isinstance(json.loads(outs[0]), list)


def test_experiment_flag_overrides_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 50, "replications": 4, "h_grid": [0, 1], "models": ["normal:0,1"]}))
    assert run(["experiment", "3", "--config", str(cfg), "--replications", "3", "--workers", "1"]) == 0
    out = capsys.readouterr().out
    assert "model=normal" in out and "laplace" not in out


def test_ingest_output_file(capsys, tmp_path):
    dest = tmp_path / "clean.csv"
    assert run(["ingest", "--prices", str(BUNDLED_PRICES), "--output", str(dest)]) == 0
    out, err = capsys.readouterr()
    assert out == "" and "14 filled" in err
    lines = dest.read_text().splitlines()
    assert lines[0] == "date,close,log_return" and len(lines) == 4501


def test_ingest_json(capsys, tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("date,close\n2020-01-01,100\n2020-01-02,\n2020-01-03,110\n2020-01-06,99\n")
    rows = _json(capsys, ["ingest", "--prices", str(path), "--format", "json"])
    assert rows[0]["log_return"] is None and rows[1]["log_return"] == 0.0


@pytest.mark.parametrize(
    "argv",
    [
        ["variance", "--model", "normal:0,1", "--tau", "1.5", "--h", "0"],
        ["variance", "--model", "normal:0,1", "--z", "0", "--tau", "0.5", "--h", "0"],
        ["population", "--model", "normal:0,1", "--z", "1", "--h", "0"],
        ["population", "--model", "normal:0,1", "--z", "0", "--h", "-1"],
        ["experiment", "7"],
        ["estimate", "--bogus"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["variance", "--model", "cauchy:0,1", "--tau", "0.5", "--h", "0"], "cauchy"),
        (["population", "--model", "empirical:/nonexistent.csv", "--z", "0", "--h", "1"], "nonexistent"),
        (["estimate", "--data", "/nonexistent.csv", "--z", "0", "--h", "1"], "nonexistent"),
        (["ingest", "--prices", "/nonexistent.csv"], "nonexistent"),
    ],
)
def test_data_errors_exit_1(argv, needle, capsys):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert needle in err and len(err.strip().splitlines()) == 1


def test_estimate_without_z_is_error(capsys, three):
    assert run(["estimate", "--data", three, "--h", "1"]) == 1
    assert "--z" in capsys.readouterr().err


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help_documents_every_flag(sub, capsys):
    assert run([sub, "--help"]) == 0
    text = capsys.readouterr().out
    parser = build_parser()
    subparser = parser._subparsers._group_actions[0].choices[sub]
    for action in subparser._actions:
        assert action.help, f"{sub}: {action.dest} has no help text"
        for opt in action.option_strings:
            assert opt in text


def test_top_level_help(capsys):
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    for sub in SUBCOMMANDS:
        assert sub in out


def test_module_entry_point(three):
    proc = subprocess.run(
        [sys.executable, "-m", "smoothq", "estimate", "--data", three, "--z", "0", "--h", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["q_hat"] == 2.0
    proc = subprocess.run([sys.executable, "-m", "smoothq", "nope"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and proc.stdout == ""
