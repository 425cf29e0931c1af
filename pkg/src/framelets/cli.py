"""Command-line interface: ``framelets construct|verify|apply|dvm``.

Exit codes: 0 success, 1 invalid input, 2 numerical or verification
failure.  ``FRAMELET_TOL`` overrides the default verification tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io
from .completion import PRUNE_THRESHOLD
from .dvm import Direction, dvm_order, max_dvm_row
from .errors import (
    DesignError,
    DirectionError,
    FrameletError,
    InadmissibleLowpassError,
    InfeasibleDesignError,
)
from .mask import FilterMask, OffsetGrid, devectorize
from .pipeline import DEMOS, DesignRequest, demo, run_pipeline
from .spline import SplineSpec, bspline_lowpass
from .transform import analyze, energy_split, periodic_pad, synthesize
from .uep import FilterBank, check_diagonal_uep, check_general_uep

DEFAULT_TOL = 1e-10
INPUT_ERRORS = (DesignError, InadmissibleLowpassError, InfeasibleDesignError, DirectionError)


def _fmt_offset(grid: OffsetGrid, k: int) -> str:
    return "(" + ", ".join(str(int(v)) for v in grid.offsets[k]) + ")"


# -- verification ------------------------------------------------------------


def verify_bank(bank: FilterBank, tol: float, grid_size: int = 64) -> dict:
    """Every check the ``verify`` command prints, as a dict."""
    diag = check_diagonal_uep(bank, tol)
    gen = check_general_uep(bank.lowpass, bank.highpass, grid_size=grid_size, tol=tol)
    sums = [float(m.coeffs.sum()) for m in bank.highpass]
    scales = [max(1.0, float(np.abs(m.coeffs).sum())) for m in bank.highpass]
    bad_sums = [i for i, (s, w) in enumerate(zip(sums, scales)) if abs(s) > tol * w]
    dvm = []
    for ann in bank.metadata.get("dvm", []) or []:
        i = int(ann["filter"])
        atol = float(ann.get("tol", 1e-8))
        got = dvm_order(bank.highpass[i], Direction(ann["direction"]), tol=atol)
        dvm.append({**ann, "computed": got, "passed": got >= int(ann.get("order", 0))})
    passed = (diag.passed or gen.passed) and not bad_sums and all(d["passed"] for d in dvm)
    return {"diagonal": diag, "general": gen, "sums": sums, "bad_sums": bad_sums, "dvm": dvm, "passed": passed}


def _print_verify(bank: FilterBank, rep: dict, tol: float, out) -> None:
    diag, gen = rep["diagonal"], rep["general"]
    g = bank.grid
    print(f"filters: {len(bank)} high-pass on {len(g)} offsets (dim {bank.dim})", file=out)
    print(f"tolerance: {tol:.3g}", file=out)
    loc = ""
    if diag.offdiag_at is not None:
        k, t = diag.offdiag_at
        loc = f" at offsets {_fmt_offset(g, k)}-{_fmt_offset(g, t)}"
    print(f"M off-diagonal max: {diag.offdiag:.3e}{loc}", file=out)
    print(
        f"M diagonal vs a max: {diag.diag_dev:.3e} at offset {_fmt_offset(g, diag.diag_dev_at)}",
        file=out,
    )
    print(f"half-shift identity max: {diag.modulation_dev:.3e}", file=out)
    status = "pass" if diag.passed else ("non-diagonal M (informational)" if gen.passed else "FAIL")
    print(f"coefficient-exact check: {status} (deviation {diag.deviation:.3e})", file=out)
    print(
        f"sampled check on {gen.grid_size}^{bank.dim} grid: {'pass' if gen.passed else 'FAIL'} "
        f"(deviation {gen.deviation:.3e})",
        file=out,
    )
    if rep["bad_sums"]:
        for i in rep["bad_sums"]:
            print(f"filter {i + 1} sums to {rep['sums'][i]:.3e}, expected 0", file=out)
    else:
        print(f"zero-sum check: pass (max |sum| {max(map(abs, rep['sums']), default=0):.3e})", file=out)
    for d in rep["dvm"]:
        beta = ",".join(f"{v:g}" for v in d["direction"])
        print(
            f"filter {d['filter'] + 1} DVM along ({beta}): {d['computed']} "
            f"(annotated {d.get('order')}) {'pass' if d['passed'] else 'FAIL'}",
            file=out,
        )
    sigma = bank.metadata.get("error_constant")
    if sigma is not None:
        print(f"error constant sigma: {sigma:.6f}", file=out)
    if bank.metadata.get("checksum_ok") is False:
        print("warning: checksum mismatch (file edited after writing)", file=out)
    print("PASS" if rep["passed"] else "FAIL", file=out)


# -- design files ------------------------------------------------------------


def _mask_from_json(obj, dim_hint=None) -> FilterMask:
    if "matrix" in obj:
        from .mask import vectorize

        anchor = obj.get("anchor")
        return vectorize(np.asarray(obj["matrix"], dtype=float), None if anchor is None else tuple(anchor))
    off = np.asarray(obj["offsets"], dtype=np.int64)
    if off.ndim == 1:
        off = off[:, None]
    return FilterMask.from_pairs(off, np.asarray(obj["coeffs"], dtype=float))


def load_design(path) -> DesignRequest:
    """Declarative design file (JSON).

    ``lowpass`` is ``{"spline_order": m, "dim": s}`` or
    ``{"offsets": [...], "coeffs": [...]}``; ``filters`` is a list of
    ``{"matrix": [[...]], "anchor": [row, col]}`` or offset/coefficient
    pairs.  Optional: ``lambda``, ``optimize``, ``prune``, ``tol``.
    """
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DesignError(f"cannot read design file {path}: {exc}") from None
    try:
        lp = spec["lowpass"]
        if "spline_order" in lp:
            lowpass = SplineSpec(int(lp["spline_order"]), int(lp.get("dim", 2)))
        else:
            lowpass = _mask_from_json(lp)
        filters = [_mask_from_json(f) for f in spec.get("filters", [])]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FrameletError):
            raise
        raise DesignError(f"malformed design file: {exc}") from None
    return DesignRequest(
        lowpass,
        filters,
        optimize=bool(spec.get("optimize", True)),
        lam=spec.get("lambda"),
        prune=float(spec.get("prune", PRUNE_THRESHOLD)),
        tol=float(spec.get("tol", 1e-10)),
    )


# -- commands ----------------------------------------------------------------


def cmd_construct(args, out=None) -> int:
    out = out or sys.stdout
    tol = io.env_tolerance(DEFAULT_TOL)
    try:
        if args.demo:
            bank = demo(args.demo)
        elif args.design:
            bank = run_pipeline(load_design(args.design))
        else:
            spec = SplineSpec(args.spline_order, args.dim)
            bank = run_pipeline(DesignRequest(spec, optimize=not args.no_optimize))
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FrameletError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        io.write_bank(bank, args.output)
    rep = verify_bank(bank, tol)
    prov = {t: bank.provenance.count(t) for t in dict.fromkeys(bank.provenance)}
    print(f"filters: {len(bank)} ({', '.join(f'{n} {t}' for t, n in prov.items())})", file=out)
    print(f"coefficient-exact UEP deviation: {rep['diagonal'].deviation:.3e}", file=out)
    print(f"sampled UEP deviation: {rep['general'].deviation:.3e}", file=out)
    sigma = bank.metadata.get("error_constant")
    if sigma is not None:
        lo, hi = bank.metadata["frame_bounds"]
        print(f"error constant sigma: {sigma:.6f} (frame bounds {lo:.6f}, {hi:.6f})", file=out)
    elif "n_designed" in bank.metadata and bank.metadata["n_designed"]:
        print("error constant sigma: undefined (designed rows do not span)", file=out)
    if args.output:
        print(f"wrote {args.output}", file=out)
    return 0


def _read_bank_or_exit(path):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", io.ChecksumWarning)
        return io.read_bank(path)


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    try:
        tol = args.tol if args.tol is not None else io.env_tolerance(DEFAULT_TOL)
        bank = _read_bank_or_exit(args.bankfile)
    except FrameletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = verify_bank(bank, tol, grid_size=args.grid)
    _print_verify(bank, rep, tol, out)
    return 0 if rep["passed"] else 2


def _parse_keep(text: str, n: int) -> list[int]:
    keep = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            keep.update(range(int(a), int(b) + 1))
        else:
            keep.add(int(part))
    bad = [k for k in keep if not 1 <= k <= n]
    if bad:
        raise ValueError(f"--keep channels {sorted(bad)} out of range 1..{n}")
    return sorted(k - 1 for k in keep)


def cmd_apply(args, out=None) -> int:
    out = out or sys.stdout
    try:
        bank = _read_bank_or_exit(args.bankfile)
    except FrameletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        img = io.read_image(args.image)
        if bank.dim == 1:
            img = img.ravel()
        keep = list(range(len(bank))) if args.keep is None else _parse_keep(args.keep, len(bank))
        dec = analyze(bank, img, args.levels)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    f = periodic_pad(np.asarray(img, dtype=float), args.levels)
    total = float(np.sum(f**2))
    ratio = dec.energy() / total if total else 1.0
    kept, dropped, res = energy_split(dec, keep)
    err = (total - kept - res) / total if total else 0.0
    rec = synthesize(bank, dec)
    max_err = float(np.max(np.abs(rec - img)))
    if dec.padded_shape != dec.shape:
        print(f"padded periodically from {dec.shape} to {dec.padded_shape}", file=out)
    print(f"energy ratio: {ratio:.15f}", file=out)
    print(f"E(f)/|f|^2 with {len(keep)} of {len(bank)} channels kept: {err:.6e}", file=out)
    sigma = bank.metadata.get("error_constant")
    if sigma is not None:
        print(f"bound sigma: {sigma:.6f} ({'ok' if err <= sigma + 1e-9 else 'VIOLATED'})", file=out)
    print(f"round-trip max error: {max_err:.3e}", file=out)
    if args.out:
        io.write_decomposition(
            dec,
            args.out,
            {"keep": [k + 1 for k in keep], "energy_ratio": ratio, "truncation_ratio": err, "bank": str(args.bankfile)},
        )
        print(f"wrote {Path(args.out) / 'manifest.json'}", file=out)
    return 0 if abs(ratio - 1.0) <= 1e-9 else 2


def _parse_direction(text: str, dim: int) -> Direction:
    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise DirectionError(f"cannot parse direction {text!r}") from None
    if len(vals) != dim:
        raise DirectionError(f"direction needs {dim} components, got {len(vals)}")
    return Direction(vals)


def cmd_dvm(args, out=None) -> int:
    out = out or sys.stdout
    try:
        bank = _read_bank_or_exit(args.bankfile)
    except FrameletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        beta = _parse_direction(args.direction, bank.dim)
    except DirectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.construct_max:
        try:
            d, scale = max_dvm_row(bank.lowpass, beta)
        except DirectionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except FrameletError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        mask = FilterMask(bank.grid, np.sqrt(bank.a) * d)
        n = dvm_order(mask, beta, tol=args.tol)
        print(f"max-DVM filter along ({args.direction}): order {n} (solution scale {scale:.6g})", file=out)
        if bank.dim <= 2:
            mat, _ = devectorize(mask)
            print(np.array2string(mat, precision=6, suppress_small=False), file=out)
        if args.output:
            ann = {"dvm": [{"filter": 0, "direction": beta.beta.tolist(), "order": n, "tol": args.tol}]}
            io.write_bank(FilterBank(bank.lowpass, (mask,), ("designed",), ann), args.output)
            print(f"wrote {args.output}", file=out)
        return 0
    if args.filter is not None:
        if not 1 <= args.filter <= len(bank):
            print(f"error: --filter must be in 1..{len(bank)}", file=sys.stderr)
            return 1
        idx = [args.filter - 1]
    else:
        idx = range(len(bank))
    for i in idx:
        n = dvm_order(bank.highpass[i], beta, tol=args.tol, r_max=args.r_max)
        print(f"filter {i + 1} [{bank.provenance[i]}]: {n}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framelets", description="Directional Parseval framelet filter banks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="design a bank and write it to a file")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--demo", choices=DEMOS)
    src.add_argument("--design", help="JSON design file")
    c.add_argument("--spline-order", type=int, default=2)
    c.add_argument("--dim", type=int, default=2)
    c.add_argument("--no-optimize", action="store_true")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check UEP, zero sums and DVM annotations")
    v.add_argument("bankfile")
    v.add_argument("--grid", type=int, default=64, help="samples per axis for the sampled check")
    v.add_argument("--tol", type=float, default=None)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("apply", help="decompose an image and report energies")
    a.add_argument("bankfile")
    a.add_argument("image", help=".pgm (P5) or headerless .csv")
    a.add_argument("--levels", type=int, default=1)
    a.add_argument("--keep", help="1-based channel list, e.g. 1-8,10")
    a.add_argument("--out", help="directory for coefficient CSVs and manifest")
    a.set_defaults(func=cmd_apply)

    d = sub.add_parser("dvm", help="directional vanishing moment orders")
    d.add_argument("bankfile")
    d.add_argument("--direction", required=True, help="comma-separated components, e.g. 0,1")
    d.add_argument("--filter", type=int, help="1-based filter index (default: all)")
    d.add_argument("--tol", type=float, default=1e-8)
    d.add_argument("--r-max", type=int, default=None)
    d.add_argument("--construct-max", action="store_true", help="build the maximal-order filter")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dvm)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except FrameletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
