"""Bank files, images and decomposition dumps.

Bank files are JSON.  Floats are written with Python's shortest
round-trip representation, so reading a file gives back the same
doubles.  A SHA-256 over the coefficient payload detects edits.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from pathlib import Path

import numpy as np

from .errors import FrameletError
from .mask import FilterMask, OffsetGrid
from .transform import Decomposition
from .uep import FilterBank

FORMAT_VERSION = 1
TOOL_VERSION = "0.1.0"


class BankFormatError(FrameletError):
    """A bank file is unreadable or structurally invalid."""


class ChecksumWarning(UserWarning):
    """The coefficient payload does not match the stored checksum."""


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _payload(offsets, lowpass, highpass) -> bytes:
    body = {"offsets": offsets, "lowpass": lowpass, "highpass": highpass}
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


def checksum(offsets, lowpass, highpass) -> str:
    return hashlib.sha256(_payload(offsets, lowpass, highpass)).hexdigest()


def bank_to_dict(bank: FilterBank) -> dict:
    offsets = bank.grid.offsets.tolist()
    lowpass = [float(v) for v in bank.a]
    highpass = [[float(v) for v in m.coeffs] for m in bank.highpass]
    meta = dict(bank.metadata)
    dvm = meta.pop("dvm", [])
    per_filter: dict[int, list] = {}
    for ann in dvm:
        entry = {k: v for k, v in ann.items() if k != "filter"}
        per_filter.setdefault(int(ann["filter"]), []).append(entry)
    meta.setdefault("tool_version", TOOL_VERSION)
    return {
        "format_version": FORMAT_VERSION,
        "dim": bank.dim,
        "offsets": offsets,
        "lowpass": lowpass,
        "highpass": [
            {"coeffs": row, "provenance": tag, "dvm": per_filter.get(i, [])}
            for i, (row, tag) in enumerate(zip(highpass, bank.provenance))
        ],
        "metadata": _jsonable(meta),
        "checksum": checksum(offsets, lowpass, highpass),
    }


def bank_from_dict(data: dict, strict: bool = False) -> FilterBank:
    """Rebuild a bank; ``strict`` turns a checksum mismatch into an error.

    By default a mismatch only warns; the stored value and a
    ``checksum_ok`` flag go into the metadata.
    """
    try:
        if int(data["format_version"]) != FORMAT_VERSION:
            raise BankFormatError(f"unsupported format_version {data['format_version']!r}")
        dim = int(data["dim"])
        offsets = [[int(v) for v in o] for o in data["offsets"]]
        lowpass = [float(v) for v in data["lowpass"]]
        entries = list(data["highpass"])
        highpass = [[float(v) for v in e["coeffs"]] for e in entries]
        prov = [str(e.get("provenance", "designed")) for e in entries]
        meta = dict(data.get("metadata") or {})
    except BankFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BankFormatError(f"malformed bank file: {exc!r}") from None
    if any(len(o) != dim for o in offsets):
        raise BankFormatError(f"every offset must have {dim} components")
    ok = data.get("checksum") == checksum(offsets, lowpass, highpass)
    if not ok:
        msg = "bank checksum mismatch: coefficients were edited after writing"
        if strict:
            raise BankFormatError(msg)
        warnings.warn(msg, ChecksumWarning, stacklevel=2)
    try:
        off = np.asarray(offsets, dtype=np.int64).reshape(-1, dim)
        order = np.lexsort(off.T)
        if not np.array_equal(order, np.arange(len(order))):
            raise BankFormatError("offsets are not in canonical order")
        grid = OffsetGrid(off)
        lp = FilterMask(grid, lowpass)
        hp = tuple(FilterMask(grid, row) for row in highpass)
        dvm = [
            {"filter": i, **ann} for i, e in enumerate(entries) for ann in (e.get("dvm") or [])
        ]
        if dvm:
            meta["dvm"] = dvm
        meta["checksum_ok"] = ok
        return FilterBank(lp, hp, tuple(prov), meta)
    except BankFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise BankFormatError(f"invalid bank contents: {exc}") from None


def write_bank(bank: FilterBank, path) -> None:
    d = bank_to_dict(bank)
    d["metadata"].pop("checksum_ok", None)
    Path(path).write_text(json.dumps(d, indent=1) + "\n")


def read_bank(path, strict: bool = False) -> FilterBank:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BankFormatError(f"cannot read bank file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise BankFormatError("bank file must hold a JSON object")
    return bank_from_dict(data, strict=strict)


# -- images -----------------------------------------------------------------


def _pgm_tokens(buf: bytes, count: int):
    vals, pos = [], 2
    while len(vals) < count:
        while pos < len(buf) and buf[pos : pos + 1].isspace():
            pos += 1
        if buf[pos : pos + 1] == b"#":
            while pos < len(buf) and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos : pos + 1].isspace():
            pos += 1
        vals.append(int(buf[start:pos]))
    return vals, pos + 1


def read_pgm(path) -> np.ndarray:
    """Binary P5 PGM, 8 or 16 bit, as a float array."""
    buf = Path(path).read_bytes()
    if buf[:2] != b"P5":
        raise ValueError(f"{path}: not a binary P5 PGM")
    try:
        (w, h, maxval), pos = _pgm_tokens(buf, 3)
    except ValueError:
        raise ValueError(f"{path}: malformed PGM header") from None
    if not 0 < maxval < 65536:
        raise ValueError(f"{path}: bad maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.uint8
    n = w * h * np.dtype(dtype).itemsize
    data = buf[pos : pos + n]
    if len(data) != n:
        raise ValueError(f"{path}: truncated pixel data")
    return np.frombuffer(data, dtype=dtype).reshape(h, w).astype(float)


def write_pgm(path, img, maxval: int | None = None) -> None:
    """Write a P5 PGM; values are rounded and clipped to ``[0, maxval]``."""
    a = np.asarray(img, dtype=float)
    if a.ndim != 2:
        raise ValueError("PGM images are 2D")
    if maxval is None:
        maxval = 255 if a.max(initial=0) <= 255 else 65535
    dtype = np.dtype(">u2") if maxval > 255 else np.uint8
    px = np.clip(np.rint(a), 0, maxval).astype(dtype)
    header = f"P5\n{a.shape[1]} {a.shape[0]}\n{maxval}\n".encode()
    Path(path).write_bytes(header + px.tobytes())


def read_csv(path) -> np.ndarray:
    a = np.loadtxt(path, delimiter=",", ndmin=2)
    return a


def write_csv(path, arr) -> None:
    a = np.atleast_1d(np.asarray(arr, dtype=float))
    np.savetxt(path, a if a.ndim > 1 else a[None, :], delimiter=",", fmt="%.17g")


def read_image(path) -> np.ndarray:
    p = str(path).lower()
    if p.endswith(".pgm"):
        return read_pgm(path)
    if p.endswith(".csv") or p.endswith(".txt"):
        return read_csv(path)
    raise ValueError(f"unsupported image format for {path}; use .pgm or .csv")


def write_decomposition(dec: Decomposition, outdir, extra: dict | None = None) -> Path:
    """One CSV per channel per level plus ``manifest.json``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for j, level in enumerate(dec.details, start=1):
        for i, ch in enumerate(level, start=1):
            name = f"level{j}_ch{i:02d}.csv"
            write_csv(out / name, ch)
            files.append({"level": j, "channel": i, "file": name, "shape": list(ch.shape)})
    write_csv(out / "residual.csv", dec.residual)
    manifest = {
        "levels": dec.levels,
        "shape": list(dec.shape),
        "padded_shape": list(dec.padded_shape),
        "padded": list(dec.shape) != list(dec.padded_shape),
        "boundary_mode": dec.boundary_mode,
        "downsampling_phase": dec.phase,
        "convention": "correlation, no flip; gain 2^(s/2) per level",
        "provenance": list(dec.provenance),
        "channels": files,
        "residual": {"file": "residual.csv", "shape": list(dec.residual.shape)},
    }
    if extra:
        manifest.update(_jsonable(extra))
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1) + "\n")
    return path


def read_decomposition(outdir) -> Decomposition:
    out = Path(outdir)
    man = json.loads((out / "manifest.json").read_text())
    levels = int(man["levels"])
    per_level: list[list] = [[] for _ in range(levels)]
    for entry in sorted(man["channels"], key=lambda e: (e["level"], e["channel"])):
        a = read_csv(out / entry["file"]).reshape(entry["shape"])
        per_level[entry["level"] - 1].append(a)
    details = [np.stack(l) for l in per_level]
    residual = read_csv(out / man["residual"]["file"]).reshape(man["residual"]["shape"])
    return Decomposition(
        levels,
        details,
        residual,
        tuple(man["shape"]),
        tuple(man["padded_shape"]),
        man.get("boundary_mode", "periodic"),
        int(man.get("downsampling_phase", 0)),
        tuple(man.get("provenance", ())),
    )


def env_tolerance(default: float) -> float:
    """``FRAMELET_TOL`` when set, else ``default``."""
    raw = os.environ.get("FRAMELET_TOL")
    if not raw:
        return default
    try:
        val = float(raw)
    except ValueError:
        raise FrameletError(f"FRAMELET_TOL must be a number, got {raw!r}") from None
    if not val > 0:
        raise FrameletError("FRAMELET_TOL must be positive")
    return val
