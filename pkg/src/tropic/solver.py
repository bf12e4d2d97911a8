"""Zero-dimensional solving by total-degree homotopy with the gamma trick.

Square systems are solved by tracking all Bezout-many paths from the start
system {x_i^d_i - 1 = 0}.  Endpoints that approach singular solutions are
finished with the Cauchy endgame, so multiple roots come back accurate and
deduplicate cleanly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .endgame import cauchy_endgame
from .errors import BezoutCapError, SolveFailure, TrackingError
from .poly import LinearForm, Polynomial, PolySystem
from .tracker import ConvexCombination, TrackSettings, newton_correct, track, track_batch
from .util import dedup_points, lex_key, parallel_map, stream

#: smallest-singular-value threshold below which an endpoint is flagged singular
SINGULAR_TOL = 1e-8

#: endpoint deduplication tolerance (max-norm)
DEDUP_TOL = 1e-8

#: singular endpoints carry conditioning-limited accuracy; their clusters merge wider
SINGULAR_CLUSTER_TOL = 1e-5

#: plain-tracked endpoints are trusted only this far from rank deficiency
_TRUST_SIGMA = 1e-5

#: parameter value at which endpoint finishing decisions are made
_ENDGAME_T = 0.02

#: beyond this size a path is treated as escaping; no endgame is attempted
_ESCAPE_NORM = 1e4

#: lockstep batches are chunked to bound memory on huge Bezout counts
_BATCH_LIMIT = 512


@dataclass
class SolutionSet:
    """Finite endpoints of a solve, lexicographically sorted."""

    points: list
    singular: list
    failures: int

    def __len__(self):
        return len(self.points)

    def nonsingular_points(self) -> list:
        return [p for p, s in zip(self.points, self.singular) if not s]


def sigma_min(matrix: np.ndarray) -> float:
    try:
        return float(np.linalg.svd(matrix, compute_uv=False)[-1])
    except np.linalg.LinAlgError:
        return 0.0


def system_sigma_min(system: PolySystem, point) -> float:
    return sigma_min(system.jacobian(point))


def bezout_count(system: PolySystem) -> int:
    count = 1
    for d in system.degrees:
        count *= d
    return count


def finish_path(homotopy, start, settings: TrackSettings, c_max: int = 12,
                refine_singular: bool = True):
    """Track a path from t=1 to t=0 and return (point, singular, status).

    Nonsingular endpoints come from plain tracking plus a Newton polish;
    anything rank-deficient or stalled is finished by the Cauchy endgame from
    a well-conditioned base point.  With refine_singular off the endgame is
    skipped and singular endpoints are returned at plain-tracking accuracy
    (enough when only coarse locations are needed, as for critical points).
    """
    # anything beyond the escape norm is classified diverged anyway, so cut
    # excursions early instead of climbing to the configured divergence norm
    capped = replace(settings, divergence_norm=min(settings.divergence_norm, 10 * _ESCAPE_NORM))
    leg1 = track(homotopy, start, 1.0, _ENDGAME_T, capped)
    if leg1.status == "diverged":
        return leg1.end, False, "diverged"
    escaping = float(np.max(np.abs(leg1.end))) > _ESCAPE_NORM
    if leg1.status == "stalled":
        if escaping:
            return leg1.end, False, "diverged"
        if not refine_singular:
            return leg1.end, True, "success" if abs(leg1.t_reached) < 1e-5 else "failed"
        # trouble before the endgame zone: loop from wherever we stopped
        try:
            result = cauchy_endgame(homotopy, leg1.end, leg1.t_reached, settings, c_max=c_max)
            return result.point, True, "success"
        except TrackingError:
            return leg1.end, True, "failed"
    base_point, base_t = leg1.end, _ENDGAME_T

    leg2 = track(homotopy, base_point, base_t, 0.0, capped)
    if leg2.status == "diverged":
        return leg2.end, False, "diverged"
    if leg2.success:
        polished, ok = newton_correct(homotopy, leg2.end, 0.0, settings)
        point = polished if ok else leg2.end
        smin = sigma_min(homotopy.jacobian_x(point, 0.0))
        if ok and smin > _TRUST_SIGMA:
            return point, smin < SINGULAR_TOL, "success"
    if escaping:
        # plain tracking could not pin the escaping path down: call it diverged
        return leg2.end, False, "diverged"
    if not refine_singular:
        if leg2.success:
            return leg2.end, True, "success"
        return leg2.end, True, "success" if abs(leg2.t_reached) < 1e-5 else "failed"
    # singular or stalled endpoint: Cauchy endgame from the healthy base point
    try:
        result = cauchy_endgame(homotopy, base_point, base_t, settings, c_max=c_max)
    except TrackingError:
        if leg2.success:
            smin = sigma_min(homotopy.jacobian_x(leg2.end, 0.0))
            return leg2.end, smin < SINGULAR_TOL, "success"
        return leg2.end, True, "failed"
    smin = sigma_min(homotopy.jacobian_x(result.point, 0.0))
    return result.point, smin < SINGULAR_TOL, "success"


def finish_paths_batch(homotopy, starts, settings: TrackSettings, c_max: int = 12,
                       refine_singular: bool = True) -> list:
    """Batched two-leg variant of :func:`finish_path` over many starts.

    Plain tracking runs in lockstep; only rows that actually need the Cauchy
    endgame fall back to scalar loops.
    """
    starts = list(starts)
    results: list = [None] * len(starts)
    capped = replace(settings, divergence_norm=min(settings.divergence_norm, 10 * _ESCAPE_NORM))
    leg1 = track_batch(homotopy, starts, 1.0, _ENDGAME_T, capped)

    bases, base_rows = [], []
    endgames = []  # (row, point, t, fallback_point, fallback_status)
    for i, res in enumerate(leg1):
        escaping = float(np.max(np.abs(res.end))) > _ESCAPE_NORM
        if res.status == "diverged" or (res.status == "stalled" and escaping):
            results[i] = (res.end, False, "diverged")
        elif res.status == "stalled":
            if refine_singular:
                endgames.append((i, res.end, res.t_reached, res.end, "failed"))
            else:
                ok = abs(res.t_reached) < 1e-5
                results[i] = (res.end, True, "success" if ok else "failed")
        else:
            bases.append(res.end)
            base_rows.append(i)

    leg2 = track_batch(homotopy, bases, _ENDGAME_T, 0.0, capped) if bases else []
    for base, row, res in zip(bases, base_rows, leg2):
        escaping = float(np.max(np.abs(res.end))) > _ESCAPE_NORM
        if res.status == "diverged":
            results[row] = (res.end, False, "diverged")
            continue
        if res.success:
            smin = sigma_min(homotopy.jacobian_x(res.end, 0.0))
            if smin > _TRUST_SIGMA:
                results[row] = (res.end, smin < SINGULAR_TOL, "success")
                continue
        if escaping:
            results[row] = (res.end, False, "diverged")
            continue
        if not refine_singular:
            ok = res.success or abs(res.t_reached) < 1e-5
            results[row] = (res.end, True, "success" if ok else "failed")
            continue
        fallback = (res.end, "success" if res.success else "failed")
        endgames.append((row, base, _ENDGAME_T, *fallback))

    for row, point, t, fallback_point, fallback_status in endgames:
        try:
            out = cauchy_endgame(homotopy, point, t, settings, c_max=c_max)
            smin = sigma_min(homotopy.jacobian_x(out.point, 0.0))
            results[row] = (out.point, smin < SINGULAR_TOL, "success")
        except TrackingError:
            results[row] = (fallback_point, True, fallback_status)

    # distinct paths may only share an endpoint at a singular solution;
    # nonsingular duplicates mean a path jumped sheets: re-track them strictly
    clean = [i for i, r in enumerate(results) if r[2] == "success" and not r[1]]
    if len(clean) > 1:
        _, groups = dedup_points([results[i][0] for i in clean], DEDUP_TOL)
        strict = replace(settings, newton_tol=max(settings.newton_tol * 1e-2, 1e-13),
                         step_initial=0.02, step_max=0.02)
        for group in groups:
            if len(group) > 1:
                for g in group:
                    row = clean[g]
                    results[row] = finish_path(homotopy, starts[row], strict, c_max, refine_singular)
    return results


def _collect(results, divergence_norm: float) -> SolutionSet:
    finite, flags = [], []
    failures = 0
    for point, singular, status in results:
        if status != "success" or np.max(np.abs(point)) > divergence_norm:
            failures += 1
            continue
        finite.append(point)
        flags.append(singular)
    reps, groups = dedup_points(finite, DEDUP_TOL)
    singular_of = [any(flags[i] for i in group) or len(group) > 1 for group in groups]
    # second pass: merge clusters of singular endpoints at conditioning scale
    merged_reps, merged_flags = [], []
    for rep, flag in zip(reps, singular_of):
        placed = False
        if flag:
            for k, other in enumerate(merged_reps):
                if merged_flags[k] and np.max(np.abs(rep - other)) < SINGULAR_CLUSTER_TOL:
                    placed = True
                    break
        if not placed:
            merged_reps.append(rep)
            merged_flags.append(flag)
    order = sorted(range(len(merged_reps)), key=lambda i: lex_key(merged_reps[i]))
    return SolutionSet([merged_reps[i] for i in order], [merged_flags[i] for i in order], failures)


def solve_total_degree(f: PolySystem, settings: TrackSettings | None = None, seed: int = 0,
                       max_paths: int | None = None, refine_singular: bool = True) -> SolutionSet:
    """All finite solutions of a square system via a total-degree start system."""
    settings = settings or TrackSettings()
    n = f.nvars
    if len(f.polys) != n:
        raise ValueError(f"system must be square; got {len(f.polys)} equations in {n} unknowns")
    degrees = f.degrees
    if any(d == 0 for d in degrees):
        raise ValueError("system contains a constant equation")
    paths = bezout_count(f)
    if max_paths is not None and paths > max_paths:
        raise BezoutCapError(f"total-degree solve needs {paths} paths, above the cap {max_paths}")

    # random phases keep the start roots away from the target's roots
    phases = stream(seed, "start-roots").uniform(size=n)
    start_polys = []
    for i, d in enumerate(degrees):
        exps = np.zeros((2, n), dtype=np.int64)
        exps[0, i] = d
        start_polys.append(Polynomial(n, exps, [1.0, -np.exp(2j * np.pi * phases[i])]))
    start_system = PolySystem(n, start_polys, f.varnames)
    gamma = complex(np.exp(2j * np.pi * stream(seed, "gamma").uniform()))
    homotopy = ConvexCombination(f, start_system, gamma)

    roots = [
        np.exp(2j * np.pi * (phases[i] + np.arange(d)) / d) for i, d in enumerate(degrees)
    ]
    c_max = max(4, min(24, max(degrees) * 2))
    starts = [np.array(combo, dtype=complex) for combo in itertools.product(*roots)]
    if len(starts) > _BATCH_LIMIT:
        results = []
        for lo in range(0, len(starts), _BATCH_LIMIT):
            chunk = starts[lo : lo + _BATCH_LIMIT]
            results.extend(finish_paths_batch(homotopy, chunk, settings, c_max, refine_singular))
    else:
        results = finish_paths_batch(homotopy, starts, settings, c_max, refine_singular)
    solutions = _collect(results, settings.divergence_norm)
    if len(solutions.points) == 0 and solutions.failures == paths and paths > 0:
        # every path failed outright; distinguish "no finite roots" from breakage
        if all(status == "diverged" for _, _, status in results):
            return solutions
        raise SolveFailure("all homotopy paths failed")
    return solutions


def solve_on_curve_slice(curve_system: PolySystem, hyperplane: LinearForm,
                         settings: TrackSettings | None = None, seed: int = 0,
                         max_paths: int | None = None, refine_singular: bool = True) -> SolutionSet:
    """Solutions of an (n-1)-equation curve system cut by an affine hyperplane."""
    if len(curve_system.polys) != curve_system.nvars - 1:
        raise ValueError("curve system must have exactly one fewer equation than unknowns")
    return solve_total_degree(curve_system.appended(hyperplane), settings, seed, max_paths,
                              refine_singular)
