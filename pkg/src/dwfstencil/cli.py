"""Command-line interface.

Exit codes: 0 success or valid, 1 a validity check failed, 2 usage, parse or
dimension errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import render as rendering
from .doubled_space import project
from .dwf_engine import m_ppo_frame, negativity, validate_frame, wig
from .qudit_algebra import DomainError
from .serialization import (
    FormatError,
    decode_complex_array,
    load_json,
    operator_from_json,
    save_json,
    stencil_from_json,
    stencil_to_json,
    wigner_from_json,
    wigner_to_json,
)
from .stencil_kit import (
    BUILTIN_KINDS,
    DEFAULT_TOL,
    ConstructionError,
    Stencil,
    builtin_stencil,
    sample_valid_stencil,
    validate_stencil,
    validate_stencil_fourier,
)
from .transport import apply_function_map, build_function_map

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Numbers printed at 12 significant digits."""
    x = complex(x)
    if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
        return f"{x.real + 0.0:.12g}"
    return f"{x.real:.12g}{x.imag:+.12g}j"


def _load_stencil(path) -> Stencil:
    return stencil_from_json(load_json(path))


def _report_line(report) -> str:
    res = " ".join(f"{k}={fmt(v)}" for k, v in report.residuals.items())
    return f"{report.summary()} ({report.domain} residuals: {res})"


def _negativity_text(W) -> str:
    try:
        return fmt(negativity(W))
    except DomainError:
        return "n/a (grid is not real)"


def _write_stencil(M: Stencil, args) -> int:
    report = validate_stencil(M, args.tol)
    if args.out:
        save_json(stencil_to_json(M), args.out)
        print(f"wrote {args.out}")
    print(_report_line(report))
    return EXIT_OK


def cmd_stencil_builtin(args) -> int:
    try:
        M = builtin_stencil(args.kind, args.d)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return _write_stencil(M, args)


def cmd_stencil_sample(args) -> int:
    try:
        M = sample_valid_stencil(args.d, args.seed)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    except ConstructionError as exc:
        print(f"error: {exc}; try another --seed", file=sys.stderr)
        return EXIT_FAILED
    return _write_stencil(M, args)


def cmd_stencil_validate(args) -> int:
    M = _load_stencil(args.stencil)
    checker = validate_stencil_fourier if args.fourier else validate_stencil
    report = checker(M, args.tol)
    print(_report_line(report))
    return EXIT_OK if report.ok else EXIT_FAILED


def _valid_frame_or_report(M: Stencil, tol: float):
    report = validate_stencil(M, tol)
    if not report.ok:
        print(f"error: stencil {M.label!r} is not valid: {_report_line(report)}", file=sys.stderr)
        return None
    return m_ppo_frame(M)


def cmd_wigner_compute(args) -> int:
    O = operator_from_json(load_json(args.state))
    M = _load_stencil(args.stencil)
    if O.shape[0] != M.d:
        raise UsageError(f"state has d={O.shape[0]} but stencil has d={M.d}")
    F = _valid_frame_or_report(M, args.tol)
    if F is None:
        return EXIT_FAILED
    W = wig(O, F)
    save_json(wigner_to_json(W), args.out)
    print(f"wrote {args.out}")
    print(f"trace sum: {fmt(W.sum())}")
    print(f"negativity: {_negativity_text(W)}")
    return EXIT_OK


def cmd_wigner_convert(args) -> int:
    W = wigner_from_json(load_json(args.wigner))
    M1 = _load_stencil(args.from_stencil)
    M2 = _load_stencil(args.to_stencil)
    if not (W.shape[0] == M1.d == M2.d):
        raise UsageError(f"dimension mismatch: grid d={W.shape[0]}, from d={M1.d}, to d={M2.d}")
    for M in (M1, M2):
        if _valid_frame_or_report(M, args.tol) is None:
            return EXIT_FAILED
    forward = build_function_map(M1, M2, args.tol)
    backward = build_function_map(M2, M1, args.tol)
    out = apply_function_map(forward, W)
    back = apply_function_map(backward, out)
    save_json(wigner_to_json(out), args.out)
    print(f"wrote {args.out}")
    print(f"trace sum: {fmt(W.sum())} -> {fmt(out.sum())}")
    print(f"negativity: {_negativity_text(W)} -> {_negativity_text(out)}")
    print(f"round-trip max deviation: {fmt(np.abs(back - W).max())}")
    return EXIT_OK


def _load_render_target(path):
    """Return ``(values, stencil_or_None)`` for a doubled or Wigner grid file."""
    doc = load_json(path)
    if not isinstance(doc, dict) or "grid" not in doc or "d" not in doc:
        raise FormatError(f"{path}: expected a grid document")
    values = decode_complex_array(doc["grid"])
    d = doc["d"]
    if values.shape == (2 * d, 2 * d):
        return values, stencil_from_json(doc)
    if values.shape == (d, d):
        return values, None
    raise FormatError(f"{path}: grid shape {values.shape} fits neither d={d} nor 2d")


def cmd_render(args) -> int:
    values, stencil = _load_render_target(args.grid)
    if stencil is None and args.mode != "raw":
        raise UsageError(f"--mode {args.mode} needs a stencil (doubled grid) input")
    if args.mode == "overlay":
        colors = rendering.overlay_grid(stencil.raw, stencil.projected)
    elif args.mode == "projected":
        colors = rendering.color_grid(project(stencil.raw))
    else:
        colors = rendering.color_grid(values)
    data = rendering.render(colors, args.format, args.scale)
    with open(args.out, "wb") as fh:
        fh.write(data)
    n1, n2, _ = colors.shape
    print(f"wrote {args.out} ({n1}x{n2} cells, {n1 * args.scale}x{n2 * args.scale} px)")
    return EXIT_OK


def cmd_frame_validate(args) -> int:
    M = _load_stencil(args.stencil)
    report = validate_frame(m_ppo_frame(M), args.tol)
    doc = {"stencil": M.label, "d": M.d, **report.to_dict()}
    print(json.dumps(doc, indent=1, default=_json_number))
    return EXIT_OK if report.ok else EXIT_FAILED


def _json_number(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x))


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dwf", description="Stencil-generated discrete Wigner functions.")
    sub = parser.add_subparsers(dest="group", required=True)

    def add_tol(p):
        p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL,
                       help="absolute tolerance for validity residuals (default %(default)g)")

    stencil = sub.add_parser("stencil", help="build, sample or validate stencils")
    ssub = stencil.add_subparsers(dest="command", required=True)
    p = ssub.add_parser("builtin", help="write a builtin stencil")
    p.add_argument("--kind", required=True, choices=BUILTIN_KINDS)
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--out")
    add_tol(p)
    p.set_defaults(func=cmd_stencil_builtin)
    p = ssub.add_parser("sample", help="write a random valid stencil")
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    add_tol(p)
    p.set_defaults(func=cmd_stencil_sample)
    p = ssub.add_parser("validate", help="check M1-M3 for a stencil file")
    p.add_argument("stencil")
    p.add_argument("--fourier", action="store_true", help="use the SDFT-domain criteria")
    add_tol(p)
    p.set_defaults(func=cmd_stencil_validate)

    wigner = sub.add_parser("wigner", help="compute or convert Wigner grids")
    wsub = wigner.add_subparsers(dest="command", required=True)
    p = wsub.add_parser("compute", help="DWF of a state under a stencil")
    p.add_argument("--state", required=True, help="operator or state-vector JSON")
    p.add_argument("--stencil", required=True)
    p.add_argument("--out", required=True)
    add_tol(p)
    p.set_defaults(func=cmd_wigner_compute)
    p = wsub.add_parser("convert", help="map a grid from one stencil's DWF to another's")
    p.add_argument("--wigner", required=True)
    p.add_argument("--from", dest="from_stencil", required=True)
    p.add_argument("--to", dest="to_stencil", required=True)
    p.add_argument("--out", required=True)
    add_tol(p)
    p.set_defaults(func=cmd_wigner_convert)

    p = sub.add_parser("render", help="render a grid as a PPM or SVG heatmap")
    p.add_argument("grid")
    p.add_argument("--mode", choices=("raw", "projected", "overlay"), default="raw")
    p.add_argument("--format", choices=("ppm", "svg"), default="ppm")
    p.add_argument("--scale", type=_positive_int, default=32)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    frame = sub.add_parser("frame", help="frame-level checks")
    fsub = frame.add_subparsers(dest="command", required=True)
    p = fsub.add_parser("validate", help="A1-A4 and marginalisation report as JSON")
    p.add_argument("stencil")
    add_tol(p)
    p.set_defaults(func=cmd_frame_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
