"""Command-line front end: ``pwav {compress,decompress,analyze,basis,selftest}``.

Raw inputs are little-endian float64 in C order with the shape given by
``--shape``.  Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from .basis import cascade_dual, cascade_primal
from .codec import (
    BlobFormatError,
    CodecConfig,
    CompressedBlob,
    Encoder,
    decompress,
    threshold_for_error,
)
from .grid import GridHierarchy, InadmissibleSizeError
from .lifting import make_plan

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shape(text: str) -> tuple:
    try:
        shape = tuple(int(t) for t in text.replace("x", ",").split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}") from None
    if not 1 <= len(shape) <= 3 or min(shape) < 1:
        raise argparse.ArgumentTypeError("shape needs 1 to 3 positive sizes")
    return shape


def _add_transform_flags(p, order_default=1):
    p.add_argument("--order", "-q", type=int, default=order_default, help="polynomial order q")
    p.add_argument("--kind", choices=["interp", "cg", "dg"], default="cg")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwav", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("compress", help="threshold-code a raw float64 array")
    p.add_argument("--input", required=True)
    p.add_argument("--shape", type=_shape, required=True)
    _add_transform_flags(p)
    p.add_argument("--ordering", choices=["mallat", "separable"], default="mallat")
    p.add_argument("--weighting", choices=["raw", "l2", "sobolev"], default=None,
                   help="default: l2, or sobolev when --s is nonzero")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--threshold", type=float)
    g.add_argument("--target-l2", type=float)
    p.add_argument("--s", type=float, default=0.0, help="smoothness exponent for sobolev weights")
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="JSON report path (default: stdout)")

    p = sub.add_parser("decompress", help="reconstruct a raw float64 array from a blob")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("analyze", help="sorted coefficient magnitudes and per-level energy")
    p.add_argument("--input", required=True)
    p.add_argument("--shape", type=_shape, required=True)
    _add_transform_flags(p)
    p.add_argument("--ordering", choices=["mallat", "separable"], default="mallat")
    p.add_argument("--weighting", choices=["raw", "l2"], default="l2")
    p.add_argument("--csv", required=True, help="decay CSV: rank,magnitude,level")

    p = sub.add_parser("basis", help="sample one basis function with the cascade algorithm")
    _add_transform_flags(p)
    p.add_argument("--level", "-j", type=int, required=True)
    p.add_argument("--depth", "-J", type=int, required=True)
    p.add_argument("--which", choices=["phi", "psi", "dual-phi", "dual-psi"], default="psi")
    p.add_argument("--index", "-k", type=int, default=0)
    p.add_argument("--csv", required=True, help="CSV: x,value")

    sub.add_parser("selftest", help="run the built-in acceptance checks")
    return parser


def _read_raw(path: str, shape) -> np.ndarray:
    try:
        data = np.fromfile(path, dtype="<f8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    if data.size != int(np.prod(shape)):
        raise DataError(f"{path} holds {data.size} float64 values, shape {shape} needs {int(np.prod(shape))}")
    data = data.reshape(shape)
    if not np.all(np.isfinite(data)):
        raise DataError("input contains non-finite values")
    return data


def _write(path: str, payload: bytes):
    with open(path, "wb") as fh:
        fh.write(payload)


def cmd_compress(args) -> int:
    data = _read_raw(args.input, args.shape)
    weighting = args.weighting or ("sobolev" if args.s else "l2")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cfg = CodecConfig(args.order, args.kind, args.ordering, weighting, args.threshold or 0.0, args.s)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    enc = Encoder(data, cfg)
    extra = {}
    if args.target_l2 is not None:
        if not args.target_l2 > 0:
            raise UsageError("--target-l2 must be positive")
        report, above = threshold_for_error(enc, args.target_l2)
        threshold = report.threshold
        if abs(report.l2_error - args.target_l2) > 0.05 * args.target_l2:
            extra["target_l2"] = args.target_l2
            extra["boundary_thresholds"] = [report.threshold, above.threshold if above else None]
            extra["boundary_l2_errors"] = [report.l2_error, above.l2_error if above else None]
    else:
        threshold = args.threshold
        report = enc.report(threshold)
    _write(args.output, enc.blob(threshold).to_bytes())
    doc = json.loads(report.to_json())
    doc.update(extra)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_decompress(args) -> int:
    try:
        with open(args.input, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc.strerror}") from None
    out = decompress(CompressedBlob.from_bytes(blob))
    _write(args.output, np.ascontiguousarray(out, dtype="<f8").tobytes())
    return EXIT_OK


def cmd_analyze(args) -> int:
    data = _read_raw(args.input, args.shape)
    enc = Encoder(data, CodecConfig(args.order, args.kind, args.ordering, args.weighting))
    mag, _, lev = enc.sorted_magnitudes()
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "magnitude", "level"])
        for r, (m, l) in enumerate(zip(mag, lev)):
            w.writerow([r, repr(float(m)), int(l)])
    coeff2 = (enc.coeffs * enc.weights) ** 2
    print("level,count,energy")
    for l in np.unique(enc.levels):
        sel = enc.levels == l
        print(f"{int(l)},{int(sel.sum())},{float(coeff2[sel].sum()):.6e}")
    return EXIT_OK


def cmd_basis(args) -> int:
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    if not 0 <= args.level < args.depth:
        raise UsageError("need 0 <= --level < --depth")
    plan = make_plan(args.kind, args.order, args.depth)
    if args.which in ("phi", "psi"):
        phi, psi = cascade_primal(plan, args.level)
    else:
        phi, psi = cascade_dual(plan, args.level)
    rows = psi if args.which.endswith("psi") else phi
    if not 0 <= args.index < rows.shape[0]:
        raise UsageError(f"--index must lie in [0, {rows.shape[0]})")
    x = GridHierarchy(args.order, args.depth).coordinates(args.depth)
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for xi, v in zip(x, rows[args.index]):
            w.writerow([repr(float(xi)), repr(float(v))])
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_checks

    results = run_checks()
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_DATA


COMMANDS = {
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "analyze": cmd_analyze,
    "basis": cmd_basis,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"pwav: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, InadmissibleSizeError, BlobFormatError) as exc:
        print(f"pwav: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"pwav: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"pwav: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
