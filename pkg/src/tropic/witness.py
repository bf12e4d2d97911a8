"""Witness sets: construction, slice moves, monodromy grouping, trace test.

A witness set (system, hyperplane, points) pins down one curve numerically:
the points are the transverse intersection of the curve with a generic
hyperplane.  Monodromy loops of the hyperplane partition a witness superset
into irreducible components, and the trace test certifies each orbit as a
complete component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ComponentError, TrackingError
from .poly import LinearForm, PolySystem
from .solver import finish_paths_batch, solve_on_curve_slice
from .tracker import SlidingForm, TrackSettings, track_batch
from .util import lex_key, stream

#: tolerance for matching tracked endpoints back to known witness points
MATCH_TOL = 1e-6

#: relative tolerance of the trace test's collinearity check
TRACE_TOL = 1e-6

#: fixed translation step for parallel slices in the trace test
_TRACE_DELTA = 0.3 + 0.7j


@dataclass
class WitnessSet:
    """(system, slicing hyperplane, points) triple for one curve."""

    system: PolySystem
    hyperplane: LinearForm
    points: list

    def __post_init__(self):
        self.points = [np.asarray(p, dtype=complex) for p in self.points]

    @property
    def degree(self) -> int:
        return len(self.points)

    def subset(self, indices) -> "WitnessSet":
        return WitnessSet(self.system, self.hyperplane, [self.points[i] for i in indices])


@dataclass
class PathOutcome:
    """Per-point bookkeeping from a slice move."""

    status: str  # success | diverged | failed
    singular: bool
    point: np.ndarray


@dataclass
class SliceMove:
    witness: WitnessSet
    outcomes: list = field(default_factory=list)

    @property
    def diverged(self) -> int:
        return sum(1 for o in self.outcomes if o.status == "diverged")


def random_hyperplane(nvars: int, rng: np.random.Generator) -> LinearForm:
    """Generic affine hyperplane; fully random draws mix monodromy loops well."""
    coeffs = rng.normal(size=nvars) + 1j * rng.normal(size=nvars)
    offset = complex(rng.normal() + 1j * rng.normal())
    return LinearForm(coeffs, offset)


def build_witness_superset(f: PolySystem, seed: int = 0,
                           settings: TrackSettings | None = None,
                           max_paths: int | None = None) -> WitnessSet:
    """Slice the curve system with a random hyperplane and solve.

    Returns every finite nonsingular slice point; on a randomized system these
    may include points on extraneous components, hence "superset".
    """
    settings = settings or TrackSettings()
    if len(f.polys) != f.nvars - 1:
        raise ValueError("witness construction expects one fewer equation than unknowns")
    rng = stream(seed, "witness-slice")
    hyperplane = random_hyperplane(f.nvars, rng)
    # singular slice points are dropped below, so skip their refinement
    solutions = solve_on_curve_slice(f, hyperplane, settings, seed, max_paths, refine_singular=False)
    points = solutions.nonsingular_points()
    if not points:
        raise ComponentError("no finite nonsingular points on the witness slice")
    return WitnessSet(f, hyperplane, points)


def move_slice(ws: WitnessSet, target: LinearForm, settings: TrackSettings | None = None) -> SliceMove:
    """Track every witness point as the slice deforms linearly onto ``target``.

    Endpoints judged singular are finished with the Cauchy endgame but still
    flagged, so callers can treat them with appropriate suspicion.
    """
    settings = settings or TrackSettings()
    homotopy = SlidingForm(ws.system, ws.hyperplane, target)
    c_max = max(4, 2 * ws.degree)
    raw = finish_paths_batch(homotopy, ws.points, settings, c_max)
    outcomes = [
        PathOutcome(status if status in ("success", "diverged") else "failed", singular, end)
        for end, singular, status in raw
    ]
    moved = [o.point for o in outcomes if o.status == "success"]
    return SliceMove(WitnessSet(ws.system, target, moved), outcomes)


def _loop_permutation(ws: WitnessSet, legs, settings: TrackSettings):
    """Permutation of witness points induced by a closed loop of hyperplanes."""
    current = list(ws.points)
    forms = [ws.hyperplane] + list(legs) + [ws.hyperplane]
    for a, b in zip(forms[:-1], forms[1:]):
        homotopy = SlidingForm(ws.system, a, b)
        tracked = track_batch(homotopy, current, 1.0, 0.0, settings)
        for res in tracked:
            if not res.success:
                raise TrackingError(f"monodromy leg failed ({res.status})")
        current = [res.end for res in tracked]
    perm = []
    for p in current:
        dists = [float(np.max(np.abs(p - q))) for q in ws.points]
        k = int(np.argmin(dists))
        if dists[k] > MATCH_TOL:
            raise TrackingError("monodromy loop endpoint does not match any witness point")
        perm.append(k)
    if sorted(perm) != list(range(len(ws.points))):
        raise TrackingError("monodromy loop did not induce a permutation")
    return perm


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        self.parent[self.find(i)] = self.find(j)

    def orbits(self):
        groups: dict = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return sorted(groups.values())


def monodromy_group(ws: WitnessSet, loop_count: int = 8, seed: int = 0,
                    settings: TrackSettings | None = None) -> list:
    """Partition witness points into monodromy orbits.

    Each loop is a triangle of random complex hyperplanes.  Failed loops are
    discarded and replaced, up to 3x loop_count attempts.
    """
    settings = settings or TrackSettings()
    rng = stream(seed, "monodromy")
    uf = _UnionFind(len(ws.points))
    completed = attempts = 0
    while completed < loop_count and attempts < 3 * loop_count:
        attempts += 1
        legs = [random_hyperplane(ws.system.nvars, rng) for _ in range(2)]
        try:
            perm = _loop_permutation(ws, legs, settings)
        except TrackingError:
            continue
        for i, k in enumerate(perm):
            uf.union(i, k)
        completed += 1
        if len(uf.orbits()) == 1:
            break  # further loops can only re-merge
    if completed == 0:
        raise TrackingError("every monodromy loop failed")
    return uf.orbits()


def trace_test(ws: WitnessSet, orbit, settings: TrackSettings | None = None) -> bool:
    """Linearity-of-trace certificate that ``orbit`` is a complete component.

    Moves the slice to two parallel translates; the sum of the orbit's points
    must move along a straight line.
    """
    settings = settings or TrackSettings()
    orbit = list(orbit)
    if not orbit:
        raise ValueError("orbit must be nonempty")
    sums = [np.sum([ws.points[i] for i in orbit], axis=0)]
    for k in (1, 2):
        target = ws.hyperplane.translated(k * _TRACE_DELTA)
        homotopy = SlidingForm(ws.system, ws.hyperplane, target)
        tracked = track_batch(homotopy, [ws.points[i] for i in orbit], 1.0, 0.0, settings)
        for res in tracked:
            if not res.success:
                raise TrackingError(f"trace-test leg failed ({res.status})")
        sums.append(np.sum([res.end for res in tracked], axis=0))
    s0, s1, s2 = sums
    scale = max(1.0, *(float(np.max(np.abs(s))) for s in sums))
    return float(np.max(np.abs(s0 - 2 * s1 + s2))) <= TRACE_TOL * scale


def decompose(ws: WitnessSet, loop_count: int = 8, seed: int = 0,
              settings: TrackSettings | None = None) -> list:
    """Monodromy orbits, each certified complete by the trace test.

    Runs monodromy in small batches and stops as soon as every orbit passes
    the trace test; orbits only ever merge, so early certification is final.
    Failing orbits after the loop budget are merged greedily while that helps.
    """
    settings = settings or TrackSettings()
    rng = stream(seed, "monodromy")
    uf = _UnionFind(len(ws.points))
    passed: dict = {}

    def all_certified() -> bool:
        for orbit in uf.orbits():
            key = tuple(orbit)
            if key not in passed:
                passed[key] = trace_test(ws, orbit, settings)
            if not passed[key]:
                return False
        return True

    if all_certified():
        return uf.orbits()
    completed = attempts = 0
    while completed < loop_count and attempts < 3 * loop_count:
        attempts += 1
        legs = [random_hyperplane(ws.system.nvars, rng) for _ in range(2)]
        try:
            perm = _loop_permutation(ws, legs, settings)
        except TrackingError:
            continue
        for i, k in enumerate(perm):
            uf.union(i, k)
        completed += 1
        if all_certified():
            return uf.orbits()
    # merge uncertified orbits pairwise while any merge passes the trace test
    orbits = uf.orbits()
    changed = True
    while changed:
        changed = False
        failing = [o for o in orbits if not passed.get(tuple(o), False)]
        for a in range(len(failing)):
            for b in range(a + 1, len(failing)):
                merged = sorted(failing[a] + failing[b])
                if trace_test(ws, merged, settings):
                    orbits = [o for o in orbits if o not in (failing[a], failing[b])] + [merged]
                    passed[tuple(merged)] = True
                    changed = True
                    break
            if changed:
                break
    if any(not passed.get(tuple(o), False) for o in orbits):
        raise ComponentError("monodromy orbits could not be certified by the trace test")
    return sorted(orbits)


def select_component(ws: WitnessSet, orbits, selector: str = "largest",
                     settings: TrackSettings | None = None) -> WitnessSet:
    """Pick one certified orbit as the curve of interest.

    selector: "largest" (default, ties broken lexicographically),
    "index:k" into the size-sorted orbit list, or "point:v1,...,vn" for the
    orbit whose slice passes nearest a user-supplied point.
    """
    ranked = sorted(orbits, key=lambda o: (-len(o), lex_key(ws.points[o[0]])))
    if selector == "largest":
        return ws.subset(ranked[0])
    if selector.startswith("index:"):
        k = int(selector.split(":", 1)[1])
        if not 0 <= k < len(ranked):
            raise ComponentError(f"component index {k} out of range (found {len(ranked)} components)")
        return ws.subset(ranked[k])
    if selector.startswith("point:"):
        coords = [float(v) for v in selector.split(":", 1)[1].split(",")]
        probe = np.asarray(coords, dtype=complex)
        if len(probe) != ws.system.nvars:
            raise ComponentError("membership point must have one value per patched coordinate")
        settings = settings or TrackSettings()
        rng = stream(0, "membership")
        coeffs = np.exp(2j * np.pi * rng.uniform(size=ws.system.nvars))
        through = LinearForm(coeffs, complex(coeffs @ probe))
        best, best_dist = None, np.inf
        for orbit in ranked:
            moved = move_slice(ws.subset(orbit), through, settings)
            for p in moved.witness.points:
                d = float(np.max(np.abs(p - probe)))
                if d < best_dist:
                    best, best_dist = orbit, d
        if best is None:
            raise ComponentError("no component slice could be moved through the given point")
        return ws.subset(best)
    raise ComponentError(f"unknown component selector {selector!r}")
