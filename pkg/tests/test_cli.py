import csv
import io
import json

import numpy as np
import pytest

from snakestab import abs_model, arithmetic_measure, make_measure, piecewise_linear, point_mass
from snakestab.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "vee": write("vee.json", abs_model().to_dict()),
        "zigzag": write("zigzag.json", piecewise_linear([0, 1, 2], [-1, 2, -3, 4]).to_dict()),
        "w37": write("w37.json", make_measure([(-1, 0.3), (1, 0.7)]).to_dict()),
        "arith": write("arith.json", arithmetic_measure().to_dict()),
        "shift": write("shift.json", point_mass(0.5).to_dict()),
        "bad": write("bad.json", {"atoms": [{"t": 0.0}]}),
        "tmp": tmp_path,
    }


def test_analyze_stable(files, capsys):
    assert main(["analyze", "--model", files["vee"], "--measure", files["w37"]]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "stable"


def test_analyze_indeterminate(files, capsys):
    assert main(["analyze", "--model", files["vee"], "--measure", files["arith"]]) == 2
    assert json.loads(capsys.readouterr().out)["verdict"] == "indeterminate"


def test_analyze_missing(files, capsys):
    assert main(["analyze", "--model", "missing.json", "--measure", files["w37"]]) == 1
    assert "missing.json" in capsys.readouterr().err


def test_malformed_names_field(files, capsys):
    assert main(["analyze", "--model", files["vee"], "--measure", files["bad"]]) == 1
    assert "atoms[0]" in capsys.readouterr().err


def _read_csv(path):
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "f", "f_alpha"]
    return np.array(rows[1:], dtype=float)


def test_average_counterexample(files):
    out = str(files["tmp"] / "avg.csv")
    argv = ["average", "--model", files["vee"], "--measure", files["arith"], "--alpha", "0.5",
            "--window", "-2", "2", "--n", "401", "--out", out]
    assert main(argv) == 0
    data = _read_csv(out)
    assert data.shape == (401, 3)
    np.testing.assert_allclose(data[:, 2], np.maximum(np.abs(data[:, 0]), 0.5), atol=1e-12)


def test_average_zero_alpha(files):
    argv = ["average", "--model", files["vee"], "--measure", files["arith"], "--alpha", "0",
            "--window", "-2", "2"]
    assert main(argv) == 1


def test_average_shift(files):
    out = str(files["tmp"] / "shift.csv")
    argv = ["average", "--model", files["zigzag"], "--measure", files["shift"], "--alpha", "0.2",
            "--window", "-1", "3", "--n", "401", "--out", out]
    assert main(argv) == 0
    data = _read_csv(out)
    # grid step 0.01, shift 0.1 = 10 steps
    np.testing.assert_allclose(data[10:, 2], data[:-10, 1], atol=1e-12)


def test_sweep_zigzag(files, capsys):
    argv = ["sweep", "--model", files["zigzag"], "--measure", files["w37"], "--alpha", "0.05,0.01"]
    assert main(argv) == 0
    rep = json.loads(capsys.readouterr().out)
    assert [r["extremum_count"] for r in rep["records"]] == [3, 3]


def test_sweep_counterexample(files, capsys):
    argv = ["sweep", "--model", files["vee"], "--measure", files["arith"], "--alpha", "0.5,0.1"]
    assert main(argv) == 2
    rep = json.loads(capsys.readouterr().out)
    assert all(r["reason"] == "plateau-detected" for r in rep["records"])


def test_sweep_empty_alphas(files):
    assert main(["sweep", "--model", files["vee"], "--measure", files["w37"], "--alpha", ""]) == 1


def test_demo(capsys):
    assert main(["demo"]) == 0
    first = capsys.readouterr().out
    assert "X_1 = 0\n" in first and "X_1 = -0.4\n" in first
    assert main(["demo"]) == 0
    assert capsys.readouterr().out == first


def test_deterministic_analyze(files, capsys):
    argv = ["analyze", "--model", files["zigzag"], "--measure", files["w37"]]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == a


def test_usage_error():
    assert main(["frobnicate"]) == 1
