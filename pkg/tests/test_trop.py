"""Tropical curve drivers: boundary points, complex/real rays, aggregation."""

from fractions import Fraction

import numpy as np
import pytest

from tropic.errors import AggregationError
from tropic.patch import PatchVector, build_patched_system, draw_patch
from tropic.poly import parse_system
from tropic.trop import (
    BoundaryPoints,
    PathRecord,
    PipelineSettings,
    aggregate,
    boundary_points,
    compute_rays,
    trop_complex,
    trop_real,
)
from tropic.util import max_norm
from tropic.witness import build_witness_superset, decompose, select_component

from oracles import balancing_residual

SEXTIC = "vars: x,y\nf = x^6 - x^3 + y^2"
QUARTIC = "vars: x,y\nf = x^3*y - x*y^3 + x^3 - y^2"
BUTTERFLY = "vars: x,y\nf = x^4 + y^4 - x^3 + x^2*y + x*y^2 - y^3"


def certified_witness(text, seed=1, real=True, patch=None):
    f = parse_system(text)
    v = PatchVector(np.asarray(patch, dtype=complex), real) if patch is not None else draw_patch(
        f.nvars + 1, real, seed
    )
    patched = build_patched_system(f, v)
    ws = build_witness_superset(patched, seed=seed)
    orbits = decompose(ws, seed=seed)
    return select_component(ws, orbits, "largest")


@pytest.fixture(scope="module")
def quartic_ws():
    return certified_witness(QUARTIC, seed=2, patch=[1.0, 1.0, 2.0])


@pytest.fixture(scope="module")
def sextic_ws():
    return certified_witness(SEXTIC, seed=3)


def _sorted_points(points):
    from tropic.util import lex_key

    return sorted((np.asarray(p) for p in points), key=lex_key)


def test_boundary_points_quartic_published(quartic_ws):
    lam = boundary_points(quartic_ws)
    assert len(lam) == 5
    blocks = lam.partition()
    assert sorted(blocks) == [0, 1]
    lam0 = _sorted_points([lam.points[i] for i in blocks[0]])
    expected0 = _sorted_points(
        [np.array([0, 1, 0]), np.array([0, 1 / 3, 1 / 3]), np.array([0, 0, 0.5]), np.array([0, -1, 1])]
    )
    assert len(lam0) == 4
    for p, q in zip(lam0, expected0):
        assert max_norm(p - q) < 1e-6
    lam1 = [lam.points[i] for i in blocks[1]]
    assert len(lam1) == 1
    assert max_norm(lam1[0] - np.array([1.0, 0, 0])) < 1e-6


def test_boundary_points_line():
    ws = certified_witness("vars: x,y\nf = x - y", seed=4, patch=[1.0, 1.0, 2.0])
    lam = boundary_points(ws)
    assert len(lam) == 2
    pts = _sorted_points(lam.points)
    expected = _sorted_points([np.array([1.0, 0, 0]), np.array([0, 1 / 3, 1 / 3])])
    for p, q in zip(pts, expected):
        assert max_norm(p - q) < 1e-8


def test_sextic_complex_rays_exact(sextic_ws):
    rays = trop_complex(sextic_ws, seed=5)
    table = {r.direction: r.multiplicity for r in rays}
    assert table == {(-2, -3): Fraction(1), (1, 3): Fraction(2), (0, -1): Fraction(3)}
    assert balancing_residual({d: int(m) for d, m in table.items()}) == (0, 0)


def test_sextic_real_directions(sextic_ws):
    rays = trop_real(sextic_ws, seed=6)
    assert {r.direction for r in rays} == {(-2, -3), (0, -1)}
    for r in rays:
        assert r.signs  # every real direction observed with explicit signs


def test_line_rays(sextic_ws):
    ws = certified_witness("vars: x,y\nf = x - y", seed=4, patch=[1.0, 1.0, 2.0])
    rays = trop_complex(ws, seed=7)
    assert {r.direction: r.multiplicity for r in rays} == {(1, 1): Fraction(1), (-1, -1): Fraction(1)}


def test_butterfly_complex_and_real(quartic_ws):
    ws = certified_witness(BUTTERFLY, seed=8)
    result = compute_rays(ws, "both", seed=9)
    complex_table = {r.direction: int(r.multiplicity) for r in result.complex_rays}
    assert complex_table == {(-1, -1): 3, (0, -1): 1, (-1, 0): 1, (1, 1): 4}
    # the cusp contributes two unit multiplicities with cycle number 2
    cusp = [r for r in result.complex_rays if r.direction == (-1, -1)]
    cusp_cycles = sorted(rec.cycle for rec in cusp[0].contributions)
    assert cusp_cycles == [1, 2, 2]
    assert all(rec.contribution == 1 for rec in cusp[0].contributions)
    real_dirs = {r.direction for r in result.real_rays}
    assert real_dirs == {(0, -1), (-1, 0), (-1, -1)}
    zero_minus = next(r for r in result.real_rays if r.direction == (0, -1))
    assert set(zero_minus.signs) == {(1, 1), (1, -1)}


def test_quartic_full_result_and_accounting(quartic_ws):
    result = compute_rays(quartic_ws, "both", seed=10)
    table = {r.direction: int(r.multiplicity) for r in result.complex_rays}
    assert table == {(-1, 1): 1, (1, 1): 2, (1, 0): 1, (-2, -3): 1}
    # every kept complex path contributes exactly once
    contributions = sum(len(r.contributions) for r in result.complex_rays)
    assert contributions == result.diagnostics["kept_paths_complex"]
    # signed result: (-2,-3) carries both sign vectors
    sr = next(r for r in result.real_rays if r.direction == (-2, -3))
    assert set(sr.signs) == {(1, 1), (1, -1)}
    # no real path on the negative side of x_1 reaches the boundary block of x_1
    minus_paths = [p for p in result.diagnostics["real_paths"] if p["j"] == 1 and p["side"] == -1]
    assert minus_paths == []


def test_real_directions_subset_of_complex(quartic_ws):
    result = compute_rays(quartic_ws, "both", seed=11)
    complex_dirs = {r.direction for r in result.complex_rays}
    assert {r.direction for r in result.real_rays} <= complex_dirs


def test_seed_invariance_of_rays(sextic_ws):
    tables = []
    for seed in (21, 22, 23):
        rays = trop_complex(sextic_ws, seed=seed)
        tables.append(tuple((r.direction, r.multiplicity) for r in rays))
    assert tables[0] == tables[1] == tables[2]


def test_empty_boundary_conventions(sextic_ws):
    empty = BoundaryPoints([], [], [], 0)
    result = compute_rays(sextic_ws, "both", boundary=empty)
    assert result.complex_rays == []
    assert result.real_rays == []


def test_aggregate_half_contributions():
    rec = lambda frac: PathRecord(1, 1, np.zeros(3), 2, (0, 2, 3), (0, 2, 3), (-2, -3), frac, 0, None)
    result = aggregate([rec(Fraction(1, 2)), rec(Fraction(1, 2))])
    assert len(result.complex_rays) == 1
    assert result.complex_rays[0].multiplicity == Fraction(1)


def test_aggregate_rejects_non_integral():
    rec = PathRecord(1, 1, np.zeros(3), 2, (0, 2, 3), (0, 2, 3), (-2, -3), Fraction(1, 2), 0, None)
    with pytest.raises(AggregationError):
        aggregate([rec])


def test_aggregate_real_sign_collection():
    mk = lambda sign: PathRecord(1, 1, np.zeros(3), 1, (0, 1, 1), (0, 1, 1), (-1, -1), Fraction(1), 0, sign)
    result = aggregate([mk((1, 1)), mk((1, -1)), mk((1, 1))])
    assert result.real_rays[0].germ_count == 3
    assert set(result.real_rays[0].signs) == {(1, 1), (1, -1)}
