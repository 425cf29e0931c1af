import json

import numpy as np
import pytest

from framelets import io
from framelets.cli import main


@pytest.fixture
def ex3_file(tmp_path):
    p = tmp_path / "ex3.json"
    assert main(["construct", "--demo", "ex3", "-o", str(p)]) == 0
    return p


def test_construct_demo(ex3_file, capsys):
    assert ex3_file.exists()
    assert main(["construct", "--demo", "ex1"]) == 0
    out = capsys.readouterr().out
    assert "filters: 8" in out


def test_construct_spline(tmp_path, capsys):
    assert main(["construct", "--spline-order", "2", "--dim", "1", "-o", str(tmp_path / "b.json")]) == 0
    assert "filters: 2" in capsys.readouterr().out


def test_construct_design_file(tmp_path, capsys):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"lowpass": {"spline_order": 2, "dim": 2}, "filters": [{"matrix": [[0, 0, 0], [-1, 0, 1], [0, 0, 0]]}]}))
    assert main(["construct", "--design", str(d)]) == 0
    assert "1 designed" in capsys.readouterr().out


def test_construct_input_errors(tmp_path, capsys):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"lowpass": {"offsets": [[0, 0]], "coeffs": [1.0]}}))
    assert main(["construct", "--design", str(d)]) == 1
    assert "no admissible high-pass" in capsys.readouterr().err
    d.write_text(json.dumps({"lowpass": {"spline_order": 2}, "filters": [{"matrix": [[1, 1], [1, 1]]}]}))
    assert main(["construct", "--design", str(d)]) == 1
    d.write_text("{")
    assert main(["construct", "--design", str(d)]) == 1


def test_verify_pass_and_fail(ex3_file, tmp_path, capsys):
    assert main(["verify", str(ex3_file)]) == 0
    assert "PASS" in capsys.readouterr().out
    data = json.loads(ex3_file.read_text())
    data["highpass"][2]["coeffs"][4] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", str(bad)]) == 2
    out = capsys.readouterr().out
    assert "FAIL" in out and "filter 3 sums to" in out and "checksum mismatch" in out


def test_verify_d4_and_malformed(tmp_path, capsys):
    p = tmp_path / "d4.json"
    main(["construct", "--demo", "d4", "-o", str(p)])
    capsys.readouterr()
    assert main(["verify", str(p)]) == 0
    assert "informational" in capsys.readouterr().out
    q = tmp_path / "junk.json"
    q.write_text("[1")
    assert main(["verify", str(q)]) == 2


def test_verify_env_tolerance(ex3_file, monkeypatch, capsys):
    monkeypatch.setenv("FRAMELET_TOL", "1e-30")
    assert main(["verify", str(ex3_file)]) == 2
    monkeypatch.setenv("FRAMELET_TOL", "1e-9")
    assert main(["verify", str(ex3_file)]) == 0
    assert "tolerance: 1e-09" in capsys.readouterr().out


def test_apply(ex3_file, tmp_path, capsys, rng):
    img = tmp_path / "img.csv"
    io.write_csv(img, rng.standard_normal((30, 33)))
    out = tmp_path / "coef"
    assert main(["apply", str(ex3_file), str(img), "--levels", "2", "--keep", "1-8", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "energy ratio: 1.0000000000" in text or "energy ratio: 0.9999999999" in text
    assert "padded periodically" in text and "ok" in text
    man = json.loads((out / "manifest.json").read_text())
    assert man["keep"] == list(range(1, 9)) and man["padded"] is True


def test_apply_errors(ex3_file, tmp_path, capsys):
    img = tmp_path / "small.csv"
    io.write_csv(img, np.ones((4, 4)))
    assert main(["apply", str(ex3_file), str(img), "--levels", "3"]) == 1
    assert main(["apply", str(ex3_file), str(img), "--keep", "40"]) == 1
    assert main(["apply", str(ex3_file), str(tmp_path / "missing.csv")]) == 1


def test_apply_non_parseval_exit_2(tmp_path, rng, capsys):
    p = tmp_path / "f.json"
    main(["construct", "--demo", "fig1", "-o", str(p)])
    img = tmp_path / "i.csv"
    io.write_csv(img, rng.standard_normal((8, 8)))
    assert main(["apply", str(p), str(img)]) == 2


def test_dvm_command(tmp_path, capsys):
    p = tmp_path / "f.json"
    main(["construct", "--demo", "fig1", "-o", str(p)])
    capsys.readouterr()
    assert main(["dvm", str(p), "--direction", "0,1", "--tol", "1e-2"]) == 0
    assert "filter 1 [designed]: 9" in capsys.readouterr().out
    assert main(["dvm", str(p), "--direction", "0,1,2"]) == 1
    assert main(["dvm", str(p), "--direction", "0,1", "--filter", "5"]) == 1
    capsys.readouterr()
    assert main(["dvm", str(p), "--direction", "0,1", "--construct-max"]) == 1
    assert "project to the same node" in capsys.readouterr().err
    out = tmp_path / "m.json"
    assert main(["dvm", str(p), "--direction", "1,1.618", "--construct-max", "-o", str(out)]) == 0
    assert "order 8" in capsys.readouterr().out
    assert main(["verify", str(out)]) == 2  # a single filter is not a frame
