"""Safe working radii for the coordinate endgames.

All loop and path computations for coordinate x_j must stay strictly inside
the common convergence disk of the branch expansions around the boundary
points.  That disk is bounded by the |x_j| values of the curve's critical
points with respect to x_j and of the boundary points themselves, so the
working radius tau_j is half the smallest nonzero such value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Polynomial, PolySystem
from .solver import solve_total_degree
from .tracker import TrackSettings
from .util import dedup_points, stream

#: values below this are treated as the exact zeros of boundary projections
ZERO_STRIP_TOL = 1e-10

#: fallback radius when no constraint exists
_FALLBACK_TAU = 0.1


@dataclass
class EozResult:
    j: int
    tau: float
    t_star: tuple
    critical_points: list


def critical_system(x_system: PolySystem, j: int, chart: np.ndarray) -> PolySystem:
    """Augmented square system whose solutions project onto the critical points.

    For an n-equation system in n+1 unknowns, adjoins null-vector variables
    nu over the Jacobian with column j removed, plus a random affine chart
    chart . nu = 1 that keeps nu away from zero.
    """
    n_eqs = len(x_system.polys)
    n_x = x_system.nvars
    if n_x != n_eqs + 1:
        raise ValueError("expected a square-by-one curve system")
    total = n_x + n_eqs
    keep_cols = [k for k in range(n_x) if k != j]
    base_names = list(x_system.varnames)
    nu_names = [f"_nu{i}" for i in range(n_eqs)]
    positions = list(range(n_x))

    polys = [p.embedded(total, positions) for p in x_system.polys]
    for i, p in enumerate(x_system.polys):
        rows, coeffs = [], []
        for col, k in enumerate(keep_cols):
            dp = p.diff(k)
            for row, c in zip(dp.exponents, dp.coeffs):
                full = np.zeros(total, dtype=np.int64)
                full[:n_x] = row
                full[n_x + col] += 1
                rows.append(full)
                coeffs.append(c)
        if not rows:
            rows = np.zeros((0, total), dtype=np.int64)
        polys.append(Polynomial(total, np.asarray(rows, dtype=np.int64).reshape(-1, total), coeffs))
    chart_rows = np.zeros((n_eqs + 1, total), dtype=np.int64)
    for i in range(n_eqs):
        chart_rows[i, n_x + i] = 1
    polys.append(Polynomial(total, chart_rows, list(chart) + [-1.0]))
    return PolySystem(total, polys, base_names + nu_names)


def _critical_solve(x_system: PolySystem, j: int, settings, seed, max_paths):
    """Deduplicated x-projections of the augmented solve, with singular flags.

    Singular endpoints come back at plain-tracking accuracy: the radius bound
    only needs coarse |x_j| values, not endgame-polished points.
    """
    settings = settings or TrackSettings()
    n_eqs = len(x_system.polys)
    chart = np.exp(2j * np.pi * stream(seed, f"eoz-chart-{j}").uniform(size=n_eqs))
    augmented = critical_system(x_system, j, chart)
    solutions = solve_total_degree(augmented, settings, seed, max_paths, refine_singular=False)
    n_x = x_system.nvars
    projections = [p[:n_x] for p in solutions.points]
    reps, groups = dedup_points(projections, 1e-8)
    flags = [any(solutions.singular[i] for i in g) for g in groups]
    return reps, flags


def critical_points(x_system: PolySystem, j: int, settings: TrackSettings | None = None,
                    seed: int = 0, max_paths: int | None = None) -> list:
    """Points of the curve where the projection onto x_j is critical.

    Solves the augmented null-vector system by total-degree homotopy and
    returns the deduplicated x-projections of all finite solutions, singular
    ones included (curve singularities are critical for every projection).
    """
    points, _ = _critical_solve(x_system, j, settings, seed, max_paths)
    return points


#: singular critical estimates this close to a boundary point are that point
_BOUNDARY_MERGE_TOL = 1e-2


def compute_tau(x_system: PolySystem, lam_points, j: int,
                settings: TrackSettings | None = None, seed: int = 0,
                max_paths: int | None = None) -> EozResult:
    """Working radius tau_j strictly inside the endgame operating zone.

    tau_j is half the smallest nonzero |x_j| over critical points and
    boundary points, or 0.1 when that set is empty.  A singular critical
    estimate that coincides with a boundary point within tracking accuracy
    contributes through that boundary point's exact projection instead of its
    own noisy one.
    """
    crit, flags = _critical_solve(x_system, j, settings, seed, max_paths)
    lam = [np.asarray(p, dtype=complex) for p in lam_points]
    values = []
    kept = []
    for p, singular in zip(crit, flags):
        if singular and lam and min(float(np.max(np.abs(p - q))) for q in lam) < _BOUNDARY_MERGE_TOL:
            continue
        kept.append(p)
        values.append(abs(complex(p[j])))
    values += [abs(complex(q[j])) for q in lam]
    t_star = sorted(v for v in values if v > ZERO_STRIP_TOL)
    tau = t_star[0] / 2.0 if t_star else _FALLBACK_TAU
    return EozResult(j, tau, tuple(t_star), kept)
