"""Cycle numbers, Cauchy-integral coefficients, valuations and endpoint estimates.

A path P(s) on the curve with driven coordinate x_j = radius * s becomes,
after uniformization by its cycle number c, an analytic map h(z) = P(z^c) on
the closed unit disk.  Trapezoid sums over the regular-polygon loop samples
are exactly the discrete Fourier transform of the vertices, which converges
exponentially for analytic integrands, so Taylor coefficients of h (and in
particular the valuation vector and the limit point h(0)) come out of one
FFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import TrackingError, ValuationError
from .poly import PolySystem
from .tracker import (
    LoopSamples,
    TrackSettings,
    newton_correct,
    parameter_loop,
    track,
    track_coordinate_circle,
)

#: relative zero threshold for Cauchy coefficients (times the coordinate's scale)
INTEGRAL_REL_TOL = 1e-8

#: vertices per loop, and the escalation cap
DEFAULT_VERTICES = 32
MAX_VERTICES = 256


@dataclass
class ValuationResult:
    """Valuations of the uniformized path, its gcd and the primitive ray."""

    u: tuple
    c: int
    g: int
    r: tuple
    leading_coeffs: np.ndarray
    converged: bool = True


def cycle_number(curve_system: PolySystem, j: int, radius: complex, p,
                 settings: TrackSettings | None = None, vertices_per_loop: int = DEFAULT_VERTICES,
                 loops_max: int | None = None):
    """Smallest loop count of x_j around 0 returning to p; keeps the samples.

    loops_max defaults to a generous bound when not given; callers normally
    pass the curve degree.
    """
    if loops_max is None:
        loops_max = 24
    samples = track_coordinate_circle(curve_system, j, radius, p, vertices_per_loop, loops_max, settings)
    return samples.c, samples


def coefficient_table(samples: LoopSamples) -> np.ndarray:
    """All Taylor coefficients a_e (rows e = 0..c*m-1) of every coordinate."""
    n = samples.c * samples.m
    return np.fft.fft(samples.points[:n], axis=0) / n


def cauchy_coefficient(samples: LoopSamples, k: int, exponent: int) -> complex:
    """Trapezoid-rule Taylor coefficient of coordinate k at the given exponent."""
    n = samples.c * samples.m
    phi = 2 * np.pi * np.arange(n) / n
    return complex(np.sum(samples.points[:n, k] * np.exp(-1j * exponent * phi)) / n)


def endpoint_estimate(samples: LoopSamples) -> np.ndarray:
    """Limit of the path as the parameter goes to 0 (exponent-0 coefficients)."""
    n = samples.c * samples.m
    return samples.points[:n].mean(axis=0)


def _scan_valuations(coeffs: np.ndarray, thresholds: np.ndarray, cap: int):
    """First exponent per coordinate whose coefficient clears its threshold."""
    u = []
    for k in range(coeffs.shape[1]):
        mags = np.abs(coeffs[: cap + 1, k])
        above = np.nonzero(mags > thresholds[k])[0]
        u.append(int(above[0]) if len(above) else None)
    return u


def valuation_ray(samples: LoopSamples, settings: TrackSettings | None = None,
                  rel_tol: float = INTEGRAL_REL_TOL,
                  max_exponent: int | None = None) -> ValuationResult:
    """Valuation vector u, gcd g and primitive ray r = u/g from loop samples.

    The result's ``converged`` flag goes false when a coefficient decision was
    closer than a factor of 10 to the zero threshold, or when recomputing from
    every other vertex changes the answer; callers then re-track with twice
    the vertices.
    """
    n = samples.c * samples.m
    coeffs = coefficient_table(samples)
    scales = np.abs(samples.points[:n]).max(axis=0)
    if np.any(scales == 0.0):
        raise ValuationError("a coordinate vanishes identically along the loop")
    thresholds = rel_tol * scales
    cap = n - 1 if max_exponent is None else min(max_exponent, n - 1)
    u = _scan_valuations(coeffs, thresholds, cap)
    for k, uk in enumerate(u):
        if uk is None:
            raise ValuationError(
                f"no nonzero coefficient for coordinate {k} up to exponent {cap}; "
                "the branch may lie in a coordinate hyperplane"
            )
    converged = True
    for k, uk in enumerate(u):
        found = np.abs(coeffs[uk, k])
        if found < 10 * thresholds[k]:
            converged = False
        if uk > 0 and np.any(np.abs(coeffs[:uk, k]) > thresholds[k] / 10):
            converged = False
    # cross-check against the half-resolution subsample
    if converged and samples.m % 2 == 0 and samples.m >= 8:
        half = LoopSamples(samples.j, samples.radius, samples.c, samples.m // 2,
                           samples.thetas[::2], samples.points[::2])
        n2 = half.c * half.m
        coeffs2 = coefficient_table(half)
        u2 = _scan_valuations(coeffs2, thresholds, min(cap, n2 - 1))
        if u2 != u:
            converged = False
    if samples.j is not None and u[samples.j] != samples.c:
        converged = False
    g = 0
    for uk in u:
        g = math.gcd(g, uk)
    g = max(g, 1)
    r = tuple(uk // g for uk in u)
    leading = np.array([coeffs[uk, k] for k, uk in enumerate(u)])
    return ValuationResult(tuple(u), samples.c, g, r, leading, converged)


@dataclass
class EndgameResult:
    point: np.ndarray
    cycle: int
    singular: bool
    ok: bool


def _loop_estimate(homotopy, x, t, settings, m, c_max):
    samples = parameter_loop(homotopy, x, t, m, c_max, settings)
    n = samples.c * samples.m
    est = samples.points[:n].mean(axis=0)
    est_half = samples.points[:n:2].mean(axis=0) if samples.m % 2 == 0 else est
    return est, est_half, samples.c


def cauchy_endgame(homotopy, x, t: complex, settings: TrackSettings,
                   vertices_per_loop: int = 16, c_max: int = 12,
                   shrinks: int = 3) -> EndgameResult:
    """Estimate the limit of a path of H(x, t) = 0 as t -> 0.

    Loops the parameter on the circle through ``t``; the mean of the samples
    of the uniformized loop is the limit point, accurate even when the
    endpoint is a singular solution.  Shrinks the radius and retries when the
    loop fails to close (another branch point inside the circle) or when the
    half-resolution mean disagrees.
    """
    tight = replace(settings, newton_tol=max(1e-13, settings.newton_tol * 1e-2))
    radius = complex(t)
    x = np.asarray(x, dtype=complex)
    last_error = None
    for _ in range(shrinks + 1):
        try:
            est, est_half, cycle = _loop_estimate(homotopy, x, radius, tight, vertices_per_loop, c_max)
            agree = float(np.max(np.abs(est - est_half))) < 1e-7 * (1.0 + float(np.max(np.abs(est))))
            if agree:
                return EndgameResult(est, cycle, True, True)
            last_error = "half-resolution disagreement"
        except TrackingError as err:
            last_error = str(err)
        # move inward along the path and retry on a smaller circle
        moved = track(homotopy, x, radius, radius / 4.0, settings)
        if moved.status == "diverged":
            raise TrackingError(f"endgame path diverged while shrinking: {last_error}")
        x, radius = moved.end, moved.t_reached
        if abs(radius) < 1e-13:
            break
    raise TrackingError(f"endgame failed to stabilize: {last_error}")


def refine_endpoint(homotopy, point, settings: TrackSettings, singular_tol: float = 1e-5):
    """Newton-polish a candidate endpoint at t = 0; returns (point, polished)."""
    polished, ok = newton_correct(homotopy, point, 0.0, settings)
    if ok and float(np.max(np.abs(polished - point))) < 1e-2 * (1.0 + float(np.max(np.abs(point)))):
        return polished, True
    return np.asarray(point, dtype=complex), False
