import json
import warnings

import numpy as np
import pytest

from framelets import io
from framelets.transform import analyze, synthesize
from framelets.uep import check_diagonal_uep


def test_bank_round_trip_is_exact(banks, tmp_path):
    b = banks("ex3")
    p = tmp_path / "b.json"
    io.write_bank(b, p)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = io.read_bank(p)
    np.testing.assert_array_equal(r.B, b.B)
    np.testing.assert_array_equal(r.a, b.a)
    assert r.provenance == b.provenance
    assert check_diagonal_uep(r).deviation == check_diagonal_uep(b).deviation
    assert r.metadata["checksum_ok"] is True


def test_dvm_annotation_round_trip(banks, tmp_path):
    p = tmp_path / "f.json"
    io.write_bank(banks("fig1"), p)
    data = json.loads(p.read_text())
    assert data["highpass"][0]["dvm"][0]["direction"] == [0.0, 1.0]
    assert io.read_bank(p).metadata["dvm"][0]["filter"] == 0


def test_checksum_warning_and_strict(banks, tmp_path):
    p = tmp_path / "b.json"
    io.write_bank(banks("ex1"), p)
    data = json.loads(p.read_text())
    data["highpass"][0]["coeffs"][0] += 1e-3
    p.write_text(json.dumps(data))
    with pytest.warns(io.ChecksumWarning):
        r = io.read_bank(p)
    assert r.metadata["checksum_ok"] is False
    with pytest.raises(io.BankFormatError, match="checksum"):
        io.read_bank(p, strict=True)


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", '{"format_version": 99}', '{"format_version": 1, "dim": 2}'],
)
def test_malformed_files(tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    with pytest.raises(io.BankFormatError):
        io.read_bank(p)


def test_missing_file(tmp_path):
    with pytest.raises(io.BankFormatError, match="cannot read"):
        io.read_bank(tmp_path / "none.json")


def test_noncanonical_offsets(banks, tmp_path):
    d = io.bank_to_dict(banks("ex1"))
    d["offsets"] = d["offsets"][::-1]
    d["checksum"] = io.checksum(d["offsets"], d["lowpass"], [e["coeffs"] for e in d["highpass"]])
    with pytest.raises(io.BankFormatError, match="canonical"):
        io.bank_from_dict(d)


@pytest.mark.parametrize("maxval", [255, 65535])
def test_pgm_round_trip(tmp_path, rng, maxval):
    img = rng.integers(0, maxval + 1, size=(7, 11)).astype(float)
    p = tmp_path / "x.pgm"
    io.write_pgm(p, img, maxval)
    np.testing.assert_array_equal(io.read_image(p), img)


def test_pgm_header_comment(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# comment\n2 1\n255\n\x01\x02")
    np.testing.assert_array_equal(io.read_pgm(p), [[1.0, 2.0]])
    p.write_bytes(b"P5\n2 2\n255\n\x01")
    with pytest.raises(ValueError, match="truncated"):
        io.read_pgm(p)
    p.write_bytes(b"P2\n1 1\n255\n1")
    with pytest.raises(ValueError, match="P5"):
        io.read_pgm(p)


def test_csv_round_trip(tmp_path, rng):
    a = rng.standard_normal((5, 4))
    p = tmp_path / "a.csv"
    io.write_csv(p, a)
    np.testing.assert_array_equal(io.read_csv(p), a)
    with pytest.raises(ValueError, match="unsupported"):
        io.read_image(tmp_path / "a.png")


def test_decomposition_round_trip(banks, tmp_path, rng):
    b = banks("ex2")
    f = rng.standard_normal((12, 16))
    dec = analyze(b, f, 2)
    io.write_decomposition(dec, tmp_path / "d", {"note": np.float64(1.5)})
    man = json.loads((tmp_path / "d" / "manifest.json").read_text())
    assert man["padded"] is False and man["note"] == 1.5
    r = io.read_decomposition(tmp_path / "d")
    np.testing.assert_array_equal(synthesize(b, r), synthesize(b, dec))


def test_env_tolerance(monkeypatch):
    monkeypatch.delenv("FRAMELET_TOL", raising=False)
    assert io.env_tolerance(1e-10) == 1e-10
    monkeypatch.setenv("FRAMELET_TOL", "1e-6")
    assert io.env_tolerance(1e-10) == 1e-6
    monkeypatch.setenv("FRAMELET_TOL", "abc")
    with pytest.raises(io.FrameletError):
        io.env_tolerance(1e-10)
