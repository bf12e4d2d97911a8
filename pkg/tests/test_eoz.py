"""Endgame operating zone: critical points and working radii."""

import numpy as np
import pytest

from tropic.eoz import compute_tau, critical_points, critical_system
from tropic.patch import PatchVector, build_patched_system
from tropic.poly import parse_system
from tropic.solver import bezout_count, sigma_min
from tropic.tracker import track_coordinate_circle
from tropic.trop import boundary_points
from tropic.witness import build_witness_superset

QUARTIC = "vars: x,y\nf = x^3*y - x*y^3 + x^3 - y^2"


@pytest.fixture(scope="module")
def quartic_patched():
    return build_patched_system(
        parse_system(QUARTIC), PatchVector(np.array([1.0, 1.0, 2.0]), real_only=True)
    )


@pytest.fixture(scope="module")
def quartic_lambda(quartic_patched):
    ws = build_witness_superset(quartic_patched, seed=21)
    return boundary_points(ws)


def test_critical_points_circle_horizontal_tangents():
    circle = parse_system("vars: x,y\nf = x^2 + y^2 - 1")
    crit = critical_points(circle, j=1, seed=2)
    assert len(crit) == 2
    xs = sorted(round(float(p[1].real), 6) for p in crit)
    assert xs == [-1.0, 1.0]
    for p in crit:
        assert abs(p[0]) < 1e-7


def test_critical_points_line_empty():
    line = parse_system("vars: x,y\nf = x - y")
    patched = build_patched_system(line, PatchVector(np.array([1.0, 1.0, 2.0])))
    crit = critical_points(patched, j=0, seed=3)
    assert crit == []


def test_critical_system_shape_and_bezout():
    sextic = parse_system("vars: x,y\nf = x^6 - x^3 + y^2")
    patched = build_patched_system(sextic, PatchVector(np.array([1.0, 1.0, 1.0])))
    aug = critical_system(patched, 0, np.array([1.0, 1.0]))
    assert aug.nvars == 5
    assert len(aug.polys) == 5
    assert bezout_count(aug) == 36


def test_quartic_published_radii(quartic_patched, quartic_lambda):
    r0 = compute_tau(quartic_patched, quartic_lambda.points, 0, seed=31)
    assert r0.t_star, "no constraints found for j=0"
    assert min(r0.t_star) == pytest.approx(0.2162, abs=1e-3)
    assert r0.tau == pytest.approx(min(r0.t_star) / 2)
    r1 = compute_tau(quartic_patched, quartic_lambda.points, 1, seed=32)
    assert min(r1.t_star) == pytest.approx(0.2483, abs=1e-3)


def test_tau_strictly_below_constraints(quartic_patched, quartic_lambda):
    for j in range(3):
        res = compute_tau(quartic_patched, quartic_lambda.points, j, seed=40 + j)
        for value in res.t_star:
            assert res.tau < value


def test_tau_fallback_without_constraints():
    # a line's patched system has no critical points; boundary projections only
    line = parse_system("vars: x,y\nf = x - y")
    patched = build_patched_system(line, PatchVector(np.array([1.0, 1.0, 2.0])))
    res = compute_tau(patched, [], 0, seed=5)
    assert res.t_star == ()
    assert res.tau == pytest.approx(0.1)


def test_loops_inside_zone_stay_nonsingular(quartic_patched, quartic_lambda):
    # consequence of working inside the endgame operating zone: the Jacobian
    # stays comfortably regular along every loop sample
    ws = build_witness_superset(quartic_patched, seed=21)
    res = compute_tau(quartic_patched, quartic_lambda.points, 0, seed=31)
    from tropic.poly import LinearForm
    from tropic.witness import move_slice

    moved = move_slice(ws, LinearForm.coordinate(3, 0, res.tau))
    p = moved.witness.points[0]
    samples = track_coordinate_circle(quartic_patched, 0, res.tau, p, 16, 8)
    for vertex in samples.points:
        # Jacobian with the driven column removed: regular inside the zone
        jac = quartic_patched.jacobian(vertex)[:, 1:]
        assert sigma_min(jac) > 1e-10
