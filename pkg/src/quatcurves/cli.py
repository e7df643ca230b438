"""Command-line front end.

Subcommands: ``frame``, ``bertrand fit``, ``bertrand check``,
``bertrand mate``, ``verify``.  Exit codes: 0 success, 1 verification
failure, 2 input error, 3 geometric degeneracy, 4 fit failure.  All
numeric output is fully deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from ._fmt import canonical_json, fnum
from .bertrand import (
    BertrandConstants,
    VerifyTolerances,
    check_conditions,
    construct_mate,
    fit_constants,
    verify_mate,
)
from .curves import CurveSpec, ParametricCurve, is_unit_speed, reparameterize_by_arclength
from .errors import DegeneracyError, FitError
from .frames import (
    FRAME3_CSV_HEADER,
    FRAME4_CSV_HEADER,
    curvature_profile,
    frame3_at,
    frame3_csv_row,
    frame4_csv_row,
    frames_on_grid,
    orthonormality_residual,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_DEGENERACY = 3
EXIT_FIT = 4

# Margin applied when deriving a default grid for curves that must be
# differentiated by finite differences (covers the widest stencil plus the
# bitorsion field step).
FD_GRID_MARGIN = 0.05


class _InputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatcurves",
        description="Quaternionic frames and (1,3)-Bertrand mate verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, spatial=False, constants=False, out=False, report=False):
        p.add_argument("--curve", required=True, help="path to a curve spec JSON document")
        if spatial:
            p.add_argument("--spatial", help="path to an associated spatial curve spec")
        if constants:
            p.add_argument(
                "--constants",
                required=True,
                help="constants JSON document: a path, or an inline JSON object",
            )
        p.add_argument("--s0", type=float, help="grid start (defaults to the usable domain)")
        p.add_argument("--s1", type=float, help="grid end")
        p.add_argument("--samples", type=int, default=101, help="grid size (>= 3)")
        p.add_argument("--step", type=float, help="override the finite-difference step")
        p.add_argument("--tol", type=float, help="override the pass/fail tolerance")
        if out:
            p.add_argument("--out", required=True, help="output file path")
        if report:
            p.add_argument("--report", required=True, help="report JSON output path")

    p_frame = sub.add_parser("frame", help="emit a frame CSV over a grid")
    add_common(p_frame, spatial=True, out=True)

    p_bertrand = sub.add_parser("bertrand", help="Bertrand constant operations")
    bsub = p_bertrand.add_subparsers(dest="bertrand_command", required=True)

    p_fit = bsub.add_parser("fit", help="fit constants from the curvature profile")
    add_common(p_fit, spatial=True, out=True)

    p_check = bsub.add_parser("check", help="check conditions for given constants")
    add_common(p_check, spatial=True, constants=True)
    p_check.add_argument("--report", help="optional report JSON output path")

    p_mate = bsub.add_parser("mate", help="emit the mate curve as CSV")
    add_common(p_mate, spatial=True, constants=True, out=True)

    p_verify = sub.add_parser("verify", help="verify the mate against the intrinsic oracle")
    add_common(p_verify, spatial=True, constants=True, report=True)

    return parser


# -- input loading ---------------------------------------------------------------

def _load_curve(path: str) -> ParametricCurve:
    try:
        spec = CurveSpec.from_file(path)
        return spec.build()
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise _InputError(f"cannot load curve spec {path!r}: {exc}") from exc


def _load_constants(text: str) -> BertrandConstants:
    try:
        if text.strip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        return BertrandConstants.from_json_dict(data)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise _InputError(f"cannot load constants: {exc}") from exc


def _ensure_unit_speed(curve: ParametricCurve) -> ParametricCurve:
    ok, _ = is_unit_speed(curve, 1e-5)
    if ok:
        return curve
    return reparameterize_by_arclength(curve)


def _grid(curve: ParametricCurve, s0: Optional[float], s1: Optional[float],
          samples: int) -> np.ndarray:
    if samples < 3:
        raise _InputError("--samples must be at least 3")
    lo, hi = curve.domain
    margin = 0.0 if curve.has_analytic_derivatives else FD_GRID_MARGIN
    lo, hi = lo + margin, hi - margin
    if s0 is not None:
        lo = s0
    if s1 is not None:
        hi = s1
    if not lo < hi:
        raise _InputError("need s0 < s1 inside the curve domain")
    return np.linspace(lo, hi, samples)


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_frame(args) -> int:
    curve = _ensure_unit_speed(_load_curve(args.curve))
    tol = args.tol if args.tol is not None else 1e-8
    grid = _grid(curve, args.s0, args.s1, args.samples)
    lines = []
    if curve.dim == 3:
        lines.append(FRAME3_CSV_HEADER)
        residual = 0.0
        for s in grid:
            f = frame3_at(curve, float(s), step=args.step)
            residual = max(residual, orthonormality_residual(f.vectors()))
            lines.append(frame3_csv_row(float(s), f, fnum))
    else:
        spatial = None
        if getattr(args, "spatial", None):
            spatial = _ensure_unit_speed(_load_curve(args.spatial))
        lines.append(FRAME4_CSV_HEADER)
        frames = frames_on_grid(curve, grid, curve3=spatial, step=args.step)
        residual = max(orthonormality_residual(f.vectors()) for f in frames)
        for s, f in zip(grid, frames):
            lines.append(frame4_csv_row(float(s), f, fnum))
    _write(args.out, "\n".join(lines) + "\n")
    print(f"max orthonormality residual: {fnum(residual)}")
    return EXIT_OK if residual <= tol else EXIT_VERIFICATION


def _profile_for(args):
    curve = _ensure_unit_speed(_load_curve(args.curve))
    spatial = None
    if getattr(args, "spatial", None):
        spatial = _ensure_unit_speed(_load_curve(args.spatial))
    grid = _grid(curve, args.s0, args.s1, args.samples)
    return curve, spatial, grid, curvature_profile(curve, grid, curve3=spatial, step=args.step)


def _print_conditions(report):
    for name, res in report.conditions.items():
        status = "PASS" if res.passed else "FAIL"
        extra = f" min_abs {fnum(res.min_abs)}" if res.min_abs is not None else ""
        print(
            f"{name}: max residual {fnum(res.max_residual)} "
            f"(tol {fnum(res.tolerance)}){extra} {status}"
        )


def cmd_bertrand_fit(args) -> int:
    _, _, _, profile = _profile_for(args)
    consts = fit_constants(profile)
    _write(args.out, canonical_json(consts.to_json_dict()))
    report = check_conditions(profile, consts)
    _print_conditions(report)
    return EXIT_OK if report.verdict else EXIT_VERIFICATION


def cmd_bertrand_check(args) -> int:
    consts = _load_constants(args.constants)
    _, _, _, profile = _profile_for(args)
    tol = args.tol if args.tol is not None else 1e-8
    report = check_conditions(profile, consts, tol=tol)
    _print_conditions(report)
    if getattr(args, "report", None):
        _write(args.report, canonical_json(report.to_json_dict()))
    return EXIT_OK if report.verdict else EXIT_VERIFICATION


def cmd_bertrand_mate(args) -> int:
    consts = _load_constants(args.constants)
    curve = _ensure_unit_speed(_load_curve(args.curve))
    grid = _grid(curve, args.s0, args.s1, args.samples)
    mate = construct_mate(curve, consts, step=args.step)
    lines = ["s,x0,x1,x2,x3"]
    for s in grid:
        p = mate.point(float(s))
        lines.append(",".join([fnum(float(s))] + [fnum(x) for x in p]))
    _write(args.out, "\n".join(lines) + "\n")
    print(f"mate written: {len(grid)} rows")
    return EXIT_OK


def cmd_verify(args) -> int:
    consts = _load_constants(args.constants)
    curve = _ensure_unit_speed(_load_curve(args.curve))
    spatial = None
    if getattr(args, "spatial", None):
        spatial = _ensure_unit_speed(_load_curve(args.spatial))
    grid = _grid(curve, args.s0, args.s1, args.samples)
    tols = VerifyTolerances()
    if args.tol is not None:
        tols.algebraic = args.tol
    report = verify_mate(curve, consts, grid, alpha3=spatial, tolerances=tols)
    _write(args.report, canonical_json(report.to_json_dict()))
    _print_conditions(report)
    for label in ("distance_deviation", "speed_deviation", "curvature_deviation",
                  "span_residual"):
        value = getattr(report, label)
        print(f"{label}: {'n/a' if value is None else fnum(value)}")
    for err in report.stage_errors:
        print(f"stage error: {err}", file=sys.stderr)
    print(f"verdict: {'PASS' if report.verdict else 'FAIL'}")
    return EXIT_OK if report.verdict else EXIT_VERIFICATION


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "frame":
            return cmd_frame(args)
        if args.command == "bertrand":
            if args.bertrand_command == "fit":
                return cmd_bertrand_fit(args)
            if args.bertrand_command == "check":
                return cmd_bertrand_check(args)
            return cmd_bertrand_mate(args)
        return cmd_verify(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERACY
    except FitError as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return EXIT_FIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
