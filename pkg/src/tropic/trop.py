"""Tropical-curve drivers: boundary points, per-coordinate endgames, aggregation.

For each coordinate x_j that the curve's boundary touches, points of the
slice x_j = +/- tau_j are flowed toward the coordinate hyperplane along
Newton homotopies; the loop samples of each path give its cycle number,
valuation vector and limit point in one sweep.  Paths limiting into the
x_j-block of the boundary contribute a primitive ray (complex case: with
multiplicity 1/r_j; real case: with the start point's sign pattern).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .endgame import (
    DEFAULT_VERTICES,
    INTEGRAL_REL_TOL,
    MAX_VERTICES,
    valuation_ray,
)
from .errors import AggregationError, TrackingError, ValuationError
from .patch import map_ray_back
from .poly import LinearForm
from .tracker import CoordinateScale, TrackSettings, parameter_loop_batch, track_coordinate_circle
from .util import dedup_points, is_real_vector, lex_key, max_norm, parallel_map, sign_vector
from .witness import WitnessSet, move_slice

#: coordinates below this magnitude snap to exact zero on boundary points
ZERO_SNAP_TOL = 1e-8

#: reality threshold scale for slice points
IMAG_TOL = 1e-6

#: tolerance for matching a path's limit to a known boundary point
LAMBDA_MATCH_TOL = 1e-6

#: wider cluster tolerance for singular boundary estimates (conditioning-limited)
SINGULAR_MERGE_TOL = 1e-5


@dataclass(frozen=True)
class PipelineSettings:
    """Knobs for the full pipeline; tracker settings ride along."""

    track: TrackSettings = TrackSettings()
    vertices: int = DEFAULT_VERTICES
    vertices_max: int = MAX_VERTICES
    zero_tol: float = ZERO_SNAP_TOL
    imag_tol: float = IMAG_TOL
    integral_rel_tol: float = INTEGRAL_REL_TOL
    match_tol: float = LAMBDA_MATCH_TOL
    max_bezout: int = 50000
    monodromy_loops: int = 8


@dataclass
class BoundaryPoints:
    """Boundary of the patched curve: points with at least one zero coordinate."""

    points: list
    first_zero: list
    singular: list
    diverged: int = 0

    def partition(self) -> dict:
        blocks: dict = {}
        for idx, j in enumerate(self.first_zero):
            blocks.setdefault(j, []).append(idx)
        return blocks

    def block(self, j: int) -> list:
        return [i for i, k in enumerate(self.first_zero) if k == j]

    def __len__(self):
        return len(self.points)


@dataclass
class Ray:
    direction: tuple
    multiplicity: Fraction
    contributions: list = field(default_factory=list)


@dataclass
class SignedRay:
    direction: tuple
    signs: tuple  # sorted tuple of distinct sign vectors
    germ_count: int = 0
    #: weighted contribution of positive-slice real paths to the complex
    #: multiplicity (the "real contribution" column of the summary tables)
    real_contribution: Fraction = Fraction(0)


@dataclass
class PathRecord:
    """One kept path: everything the aggregator and diagnostics need."""

    j: int
    side: int  # +1 for the x_j = +tau slice, -1 for x_j = -tau
    start: np.ndarray
    cycle: int
    u: tuple
    r: tuple
    direction: tuple
    contribution: Fraction
    lambda_index: int
    sign: tuple | None  # set for real paths only


@dataclass
class TropicalCurveResult:
    complex_rays: list
    real_rays: list
    diagnostics: dict


def boundary_points(ws_hat: WitnessSet, settings: PipelineSettings | None = None) -> BoundaryPoints:
    """Intersection of the patched curve with the union of coordinate hyperplanes.

    Computed one coordinate slice at a time by moving the witness hyperplane
    onto V(x_j); singular limits arrive through the Cauchy endgame inside the
    slice move.  Near-zero coordinates snap to exact zero and points are
    deduplicated across slices before partitioning by first zero coordinate.
    """
    settings = settings or PipelineSettings()
    n = ws_hat.system.nvars
    raw_points, raw_singular = [], []
    diverged = 0
    for j in range(n):
        move = move_slice(ws_hat, LinearForm.coordinate(n, j, 0.0), settings.track)
        for outcome in move.outcomes:
            if outcome.status == "diverged":
                diverged += 1
                continue
            if outcome.status != "success":
                raise TrackingError(f"boundary slice x_{j} lost a path ({outcome.status})")
            p = outcome.point.copy()
            p[np.abs(p) < settings.zero_tol] = 0.0
            if p[j] != 0.0:
                # the slice forces x_j = 0; anything else is a failed snap
                raise TrackingError(f"boundary point of slice x_{j} has |x_{j}| above the zero tolerance")
            raw_points.append(p)
            raw_singular.append(outcome.singular)
    reps, groups = dedup_points(raw_points, ZERO_SNAP_TOL)
    flags = [any(raw_singular[i] for i in g) for g in groups]
    # singular estimates are conditioning-limited; merge their clusters wider
    points, singular = [], []
    for rep, flag in zip(reps, flags):
        merged = False
        if flag:
            for k, q in enumerate(points):
                if singular[k] and max_norm(rep - q) < SINGULAR_MERGE_TOL:
                    merged = True
                    break
        if not merged:
            points.append(rep)
            singular.append(flag)
    first_zero = []
    for p in points:
        zeros = np.nonzero(p == 0.0)[0]
        first_zero.append(int(zeros[0]) if len(zeros) else -1)
    keep = [i for i, j in enumerate(first_zero) if j >= 0]
    return BoundaryPoints(
        [points[i] for i in keep],
        [first_zero[i] for i in keep],
        [singular[i] for i in keep],
        diverged,
    )


def _initial_vertices(settings: PipelineSettings, degree: int) -> int:
    # the exponent cap c * degree must stay below the sample count c * m
    m = settings.vertices
    while m <= degree + 1:
        m *= 2
    return m


def _loop_with_escalation(curve, j, radius, point, settings: PipelineSettings, degree: int,
                          samples: LoopSamples | None = None):
    """Circle samples + valuation for one path, doubling vertices until stable."""
    m = _initial_vertices(settings, degree)
    tighter = settings.track
    while True:
        if samples is None:
            samples = track_coordinate_circle(curve, j, radius, point, m, max(degree, 2), tighter)
        try:
            val = valuation_ray(samples, tighter, settings.integral_rel_tol,
                                max_exponent=samples.c * degree)
            err = None
        except ValuationError as exc:
            val, err = None, exc
        if val is not None and val.converged:
            return samples, val
        if m >= settings.vertices_max:
            if val is not None:
                return samples, val
            raise err
        m *= 2
        samples = None
        tighter = replace(tighter, newton_tol=max(1e-13, tighter.newton_tol * 1e-2))


def _match_boundary(endpoint, lam: BoundaryPoints, tol: float):
    if not lam.points:
        return None
    dists = [max_norm(endpoint - q) for q in lam.points]
    k = int(np.argmin(dists))
    return k if dists[k] < tol else None


def _process_slice(ws_hat, lam, j, radius, side, mode, settings, degree):
    """Endgame every point of one slice x_j = radius; returns kept PathRecords."""
    move = move_slice(ws_hat, LinearForm.coordinate(ws_hat.system.nvars, j, radius), settings.track)
    slice_points = []
    for outcome in move.outcomes:
        if outcome.status == "success":
            slice_points.append(outcome.point)
    slice_points.sort(key=lex_key)

    want_complex = mode in ("complex", "both") and side > 0
    want_real = mode in ("real", "both")

    def judge_real(p):
        if not is_real_vector(p, settings.imag_tol):
            return False
        # near-threshold points are re-verified at a tightened tracking tolerance
        imag = max_norm(np.asarray(p).imag)
        if imag > settings.imag_tol * (1.0 + max_norm(p)) / 10.0:
            tight = replace(settings.track, newton_tol=1e-13)
            redone = move_slice(WitnessSet(ws_hat.system, ws_hat.hyperplane, [p]),
                                LinearForm.coordinate(ws_hat.system.nvars, j, radius), tight)
            if redone.witness.points:
                return is_real_vector(redone.witness.points[0], settings.imag_tol / 10)
        return True

    wanted = []
    for p in slice_points:
        real = judge_real(p) if want_real else False
        if want_complex or real:
            wanted.append((p, real))
    if not wanted:
        return []

    # loop all kept slice points around the same circle in lockstep
    homotopy = CoordinateScale(ws_hat.system, j, radius)
    batch = parameter_loop_batch(homotopy, [p for p, _ in wanted], 1.0,
                                 _initial_vertices(settings, degree), max(degree, 2),
                                 settings.track)
    for samples in batch:
        if samples is not None:
            samples.j = j
            samples.radius = complex(radius)

    def one(args):
        (p, real), samples = args
        samples, val = _loop_with_escalation(ws_hat.system, j, radius, p, settings, degree,
                                             samples=samples)
        n_samp = samples.c * samples.m
        limit = samples.points[:n_samp].mean(axis=0)
        lam_idx = _match_boundary(limit, lam, settings.match_tol)
        if lam_idx is None or lam.first_zero[lam_idx] != j:
            return None
        direction = map_ray_back(val.r)
        records = []
        if want_complex:
            records.append(PathRecord(j, side, p, val.c, val.u, val.r, direction,
                                      Fraction(1, val.r[j]), lam_idx, None))
        if real:
            records.append(PathRecord(j, side, p, val.c, val.u, val.r, direction,
                                      Fraction(1, val.r[j]), lam_idx, sign_vector(p)))
        return records

    kept = []
    for recs in parallel_map(one, list(zip(wanted, batch))):
        if recs:
            kept.extend(recs)
    return kept


def aggregate(records, mode: str = "both") -> TropicalCurveResult:
    """Sum contributions per direction; multiplicities must come out integral."""
    complex_groups: dict = {}
    real_groups: dict = {}
    for rec in records:
        if rec.sign is None:
            complex_groups.setdefault(rec.direction, []).append(rec)
        else:
            real_groups.setdefault(rec.direction, []).append(rec)
    complex_rays = []
    for direction in sorted(complex_groups):
        recs = complex_groups[direction]
        mult = sum((r.contribution for r in recs), Fraction(0))
        if mult.denominator != 1:
            raise AggregationError(
                f"direction {direction} aggregated to non-integral multiplicity {mult}; "
                "some contributing paths were likely lost"
            )
        complex_rays.append(Ray(direction, mult, recs))
    real_rays = []
    for direction in sorted(real_groups):
        recs = real_groups[direction]
        signs = tuple(sorted({r.sign for r in recs}))
        plus_side = sum((r.contribution for r in recs if r.side > 0), Fraction(0))
        real_rays.append(SignedRay(direction, signs, len(recs), plus_side))
    return TropicalCurveResult(complex_rays, real_rays, {})


def compute_rays(ws_hat: WitnessSet, mode: str = "both",
                 settings: PipelineSettings | None = None, seed: int = 0,
                 boundary: BoundaryPoints | None = None) -> TropicalCurveResult:
    """Full per-coordinate pipeline over a certified witness set.

    mode "complex" runs only the positive slices; "real" and "both" also run
    the negative slices and label real paths with their sign patterns.  An
    empty boundary yields no rays: the real tropical curve is then the origin
    alone, encoded as an empty ray list.
    """
    from .eoz import compute_tau  # local import keeps module load cycle-free

    settings = settings or PipelineSettings()
    lam = boundary if boundary is not None else boundary_points(ws_hat, settings)
    n = ws_hat.system.nvars
    degree = ws_hat.degree
    blocks = lam.partition()

    records = []
    taus: list = [None] * n
    t_star_min: list = [None] * n
    for j in range(n):
        if j not in blocks:
            continue
        eozr = compute_tau(ws_hat.system, lam.points, j, settings.track,
                           seed, settings.max_bezout)
        taus[j] = eozr.tau
        t_star_min[j] = eozr.t_star[0] if eozr.t_star else None
        records.extend(_process_slice(ws_hat, lam, j, eozr.tau, +1, mode, settings, degree))
        if mode in ("real", "both"):
            records.extend(_process_slice(ws_hat, lam, j, -eozr.tau, -1, mode, settings, degree))

    result = aggregate(records, mode)
    kept_complex = [r for r in records if r.sign is None]
    kept_real = [r for r in records if r.sign is not None]
    result.diagnostics = {
        "tau": taus,
        "t_star_min": t_star_min,
        "lambda_sizes": [len(blocks.get(j, [])) for j in range(n)],
        "cycle_numbers": [r.cycle for r in sorted(kept_complex if mode != "real" else kept_real,
                                                  key=lambda r: (r.j, -r.side, lex_key(r.start)))],
        "boundary_count": len(lam),
        "boundary_diverged": lam.diverged,
        "component_degree": degree,
        "kept_paths_complex": len(kept_complex),
        "kept_paths_real": len(kept_real),
        "real_paths": [
            {
                "j": r.j,
                "side": r.side,
                "lambda_index": r.lambda_index,
                "direction": list(r.direction),
                "sign": list(r.sign),
                "cycle": r.cycle,
            }
            for r in sorted(kept_real, key=lambda r: (r.j, -r.side, lex_key(r.start)))
        ],
    }
    return result


def trop_complex(ws_hat: WitnessSet, settings: PipelineSettings | None = None, seed: int = 0) -> list:
    """Primitive rays with integer multiplicities of the complex tropical curve."""
    return compute_rays(ws_hat, "complex", settings, seed).complex_rays


def trop_real(ws_hat: WitnessSet, settings: PipelineSettings | None = None, seed: int = 0) -> list:
    """Signed primitive rays of the real tropical curve.

    An empty list means the real tropical curve is the origin alone.
    """
    return compute_rays(ws_hat, "real", settings, seed).real_rays
