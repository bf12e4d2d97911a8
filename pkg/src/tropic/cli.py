"""Command-line front end: load a system, run the pipeline, emit reports.

Exit codes: 1 parse/config, 2 no curve component, 3 solver or tracking
failure, 4 non-integral multiplicity, 5 Bezout cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    AggregationError,
    BezoutCapError,
    ComponentError,
    ConfigError,
    ParseError,
    PatchError,
    SolveFailure,
    TrackingError,
    TropicError,
    ValuationError,
)
from .patch import PatchVector, build_patched_system, draw_patch, verify_patch
from .poly import PolySystem, parse_system, randomize
from .trop import PipelineSettings, TropicalCurveResult, boundary_points, compute_rays
from .tracker import TrackSettings
from .util import max_norm, substream_seed
from .witness import build_witness_superset, decompose, select_component

_PATCH_REDRAWS = 5


@dataclass
class RunConfig:
    input: str
    mode: str = "both"  # complex | real | both
    seed: int = 0
    newton_tol: float = 1e-10
    zero_tol: float = 1e-8
    imag_tol: float = 1e-6
    integral_tol: float = 1e-8
    vertices: int = 32
    component: str = "largest"
    patch: list | None = None
    randomize_rows: int | None = None
    randomize_matrix: list | None = None
    max_bezout: int = 50000
    output: str | None = None
    plot: str | None = None

    def pipeline_settings(self) -> PipelineSettings:
        return PipelineSettings(
            track=TrackSettings(newton_tol=self.newton_tol),
            vertices=self.vertices,
            zero_tol=self.zero_tol,
            imag_tol=self.imag_tol,
            integral_rel_tol=self.integral_tol,
            max_bezout=self.max_bezout,
        )


def _prepare_system(f: PolySystem, cfg: RunConfig):
    """Validate shape and randomize an overdetermined system down to n-1 rows."""
    rows_needed = f.nvars - 1
    if rows_needed < 1:
        raise ConfigError("need at least two variables to define a curve")
    if cfg.randomize_rows is not None and cfg.randomize_rows != rows_needed:
        raise ConfigError(f"--randomize-rows must be {rows_needed} for this input")
    if len(f.polys) < rows_needed:
        raise ComponentError(
            f"{len(f.polys)} equations in {f.nvars} variables define no curve; expected {rows_needed}"
        )
    if len(f.polys) == rows_needed and cfg.randomize_matrix is None:
        return f
    if cfg.randomize_matrix is not None:
        try:
            a = np.asarray(cfg.randomize_matrix, dtype=complex)
        except (ValueError, TypeError) as err:
            raise ConfigError(f"malformed randomization matrix: {err}") from None
        if a.shape != (rows_needed, len(f.polys)):
            raise ConfigError(f"randomization matrix must be {rows_needed} x {len(f.polys)}")
        if cfg.mode in ("real", "both") and np.any(a.imag != 0):
            raise ConfigError("real tropical computation requires a real randomization matrix")
        from .poly import Polynomial

        polys = [
            Polynomial.combination([(a[i, k], f.polys[k]) for k in range(len(f.polys))])
            for i in range(rows_needed)
        ]
        return PolySystem(f.nvars, polys, f.varnames)
    real_only = cfg.mode in ("real", "both")
    return randomize(f, rows_needed, real_only, substream_seed(cfg.seed, "randomize")).result


def run(cfg: RunConfig) -> TropicalCurveResult:
    """Execute the pipeline for a config; returns the result (artifacts written by main)."""
    text = Path(cfg.input).read_text(encoding="utf-8")
    f = parse_system(text)
    if cfg.mode not in ("complex", "real", "both"):
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    if cfg.mode in ("real", "both") and not f.is_real:
        raise ConfigError("real tropical computation requires real input coefficients")
    f = _prepare_system(f, cfg)
    settings = cfg.pipeline_settings()
    real_patch = cfg.mode in ("real", "both")

    explicit_patch = cfg.patch is not None
    if explicit_patch and len(cfg.patch) != f.nvars + 1:
        raise ConfigError(f"--patch must supply {f.nvars + 1} entries")

    last_failure = None
    for attempt in range(_PATCH_REDRAWS):
        if explicit_patch:
            v = PatchVector(np.asarray(cfg.patch, dtype=complex), real_patch)
        else:
            v = draw_patch(f.nvars + 1, real_patch, substream_seed(cfg.seed, f"patch-{attempt}"))
        f_hat = build_patched_system(f, v)
        superset = build_witness_superset(f_hat, substream_seed(cfg.seed, "witness"), settings.track)
        orbits = decompose(superset, settings.monodromy_loops,
                           substream_seed(cfg.seed, "monodromy"), settings.track)
        ws = select_component(superset, orbits, cfg.component, settings.track)
        for i in range(f_hat.nvars):
            if all(abs(p[i]) < settings.zero_tol for p in ws.points):
                raise ComponentError(
                    f"selected component lies in the coordinate hyperplane {f_hat.varnames[i]} = 0"
                )
        lam = boundary_points(ws, settings)
        if verify_patch(ws, v, lam):
            result = compute_rays(ws, cfg.mode, settings, cfg.seed, boundary=lam)
            result.diagnostics["patch"] = [[float(z.real), float(z.imag)] for z in v.v]
            result.diagnostics["component_count"] = len(orbits)
            return result
        last_failure = f"patch draw {attempt} sent a boundary point to infinity"
        if explicit_patch:
            raise PatchError("the supplied patch vector fails the chart condition (boundary point at infinity)")
    raise PatchError(f"no usable patch vector after {_PATCH_REDRAWS} draws: {last_failure}")


def result_to_dict(result: TropicalCurveResult, vars_, mode: str, seed: int) -> dict:
    real_rays = [
        {
            "direction": list(r.direction),
            "signs": [list(s) for s in r.signs],
            "germ_count": r.germ_count,
        }
        for r in result.real_rays
    ]
    if mode in ("real", "both") and not real_rays:
        # the real tropical curve is the origin alone
        real_rays = [{"direction": [0] * len(vars_), "signs": [], "germ_count": 0}]
    diag = dict(result.diagnostics)
    diag.pop("real_paths", None)
    return {
        "version": __version__,
        "vars": list(vars_),
        "mode": mode,
        "seed": seed,
        "patch": result.diagnostics.get("patch"),
        "complex_rays": [
            {"direction": list(r.direction), "multiplicity": int(r.multiplicity)}
            for r in result.complex_rays
        ],
        "real_rays": real_rays,
        "diagnostics": diag,
    }


def emit_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def format_table(result: TropicalCurveResult, mode: str) -> str:
    """Ray table mirroring the published summaries: one row per direction."""
    real_by_dir = {r.direction: r for r in result.real_rays}
    directions = sorted({r.direction for r in result.complex_rays} | set(real_by_dir))
    lines = []
    if mode == "both":
        header = f"{'multiplicity':>12}  {'real contribution':>17}  ray"
    elif mode == "complex":
        header = f"{'multiplicity':>12}  ray"
    else:
        header = f"{'germs':>5}  {'signs':<24} ray"
    lines.append(header)
    for d in directions:
        dir_s = "(" + ", ".join(str(x) for x in d) + ")"
        sr = real_by_dir.get(d)
        if mode == "complex":
            mult = next(r.multiplicity for r in result.complex_rays if r.direction == d)
            lines.append(f"{int(mult):>12}  {dir_s}")
        elif mode == "both":
            mult = next((int(r.multiplicity) for r in result.complex_rays if r.direction == d), 0)
            real_c = int(sr.real_contribution) if sr and sr.real_contribution.denominator == 1 else (
                str(sr.real_contribution) if sr else 0)
            lines.append(f"{mult:>12}  {real_c!s:>17}  {dir_s}")
        else:
            signs = " ".join("(" + ",".join("+" if s > 0 else "-" for s in sv) + ")" for sv in sr.signs)
            lines.append(f"{sr.germ_count:>5}  {signs:<24} {dir_s}")
    if mode in ("real", "both") and not result.real_rays:
        lines.append("real tropical curve: origin only")
    return "\n".join(lines)


def emit_plot(result: TropicalCurveResult, nvars: int, path) -> None:
    """CSV of unit ray segments for 2-variable inputs."""
    if nvars != 2:
        raise ConfigError("plot data is only emitted for curves in 2 variables")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "x0", "y0", "x1", "y1", "label"])
        for r in result.complex_rays:
            writer.writerow(["complex", 0, 0, r.direction[0], r.direction[1], f"m={int(r.multiplicity)}"])
        for r in result.real_rays:
            label = ";".join("".join("+" if s > 0 else "-" for s in sv) for sv in r.signs)
            writer.writerow(["real", 0, 0, r.direction[0], r.direction[1], label])


def _parse_patch_arg(text: str) -> list:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if "j" in piece or "i" in piece:
            out.append(complex(piece.replace("i", "j")))
        else:
            out.append(complex(float(piece)))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropic",
        description="Compute the complex and real tropical curve of a polynomial system.",
    )
    parser.add_argument("--input", required=True, help="path to the polynomial system file")
    parser.add_argument("--mode", default="both", choices=["complex", "real", "both"])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol-newton", type=float, default=1e-10, dest="newton_tol")
    parser.add_argument("--tol-zero", type=float, default=1e-8, dest="zero_tol")
    parser.add_argument("--tol-imag", type=float, default=1e-6, dest="imag_tol")
    parser.add_argument("--tol-integral", type=float, default=1e-8, dest="integral_tol")
    parser.add_argument("--vertices", type=int, default=32, help="polygon vertices per loop")
    parser.add_argument("--component", default="largest",
                        help="largest | index:k | point:v1,...,vn (patched coordinates)")
    parser.add_argument("--patch", default=None, help="explicit patch vector, comma-separated")
    parser.add_argument("--randomize-rows", type=int, default=None, dest="randomize_rows")
    parser.add_argument("--randomize-matrix", default=None, dest="randomize_matrix",
                        help="JSON matrix for explicit A*f randomization")
    parser.add_argument("--max-bezout", type=int, default=50000, dest="max_bezout")
    parser.add_argument("--output", default=None, help="JSON output path (default: <input>.trop.json)")
    parser.add_argument("--plot", default=None, help="CSV path for 2D ray segments")
    return parser


_EXIT_CODES = [
    ((ParseError, ConfigError), 1),
    ((ComponentError,), 2),
    ((TrackingError, SolveFailure, PatchError, ValuationError), 3),
    ((AggregationError,), 4),
    ((BezoutCapError,), 5),
]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input=args.input,
        mode=args.mode,
        seed=args.seed,
        newton_tol=args.newton_tol,
        zero_tol=args.zero_tol,
        imag_tol=args.imag_tol,
        integral_tol=args.integral_tol,
        vertices=args.vertices,
        component=args.component,
        patch=_parse_patch_arg(args.patch) if args.patch else None,
        randomize_rows=args.randomize_rows,
        randomize_matrix=json.loads(args.randomize_matrix) if args.randomize_matrix else None,
        max_bezout=args.max_bezout,
        output=args.output,
        plot=args.plot,
    )
    try:
        f = parse_system(Path(cfg.input).read_text(encoding="utf-8"))
        result = run(cfg)
    except TropicError as err:
        for classes, code in _EXIT_CODES:
            if isinstance(err, classes):
                print(f"error: {err}", file=sys.stderr)
                return code
        print(f"error: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

    print(format_table(result, cfg.mode))
    payload = result_to_dict(result, f.varnames, cfg.mode, cfg.seed)
    out_path = cfg.output or (str(Path(cfg.input)) + ".trop.json")
    emit_json(payload, out_path)
    print(f"wrote {out_path}")
    if cfg.plot:
        emit_plot(result, f.nvars, cfg.plot)
        print(f"wrote {cfg.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
