"""Affine patching and the ray projection back to the input torus."""

import math

import numpy as np
import pytest

from tropic.patch import PatchVector, build_patched_system, draw_patch, map_ray_back, verify_patch
from tropic.poly import parse_system
from tropic.trop import BoundaryPoints

from oracles import poly_support

QUARTIC = "vars: x,y\nf = x^3*y - x*y^3 + x^3 - y^2"


def test_build_patched_quartic():
    system = parse_system(QUARTIC)
    patched = build_patched_system(system, PatchVector(np.array([1.0, 1.0, 2.0]), real_only=True))
    assert patched.nvars == 3
    assert len(patched.polys) == 2
    expected = parse_system("vars: x0,x,y\nf = x^3*y - x*y^3 + x0*x^3 - x0^2*y^2\ng = x0 + x + 2y - 1")
    assert patched.polys[0] == expected.polys[0]
    assert patched.polys[1] == expected.polys[1]


def test_build_patched_line():
    line = parse_system("vars: x,y\nf = x - y")
    patched = build_patched_system(line, PatchVector(np.array([1.0, 1.0, 1.0])))
    assert poly_support(patched.polys[0]) == [(0, 0, 1), (0, 1, 0)]
    assert patched.polys[1].evaluate(np.array([0.25, 0.25, 0.5], dtype=complex)) == pytest.approx(0)


def test_patch_scaling_rescales_curve():
    system = parse_system(QUARTIC)
    v = np.array([1.0, 1.0, 2.0])
    lam = 3.0
    patched_v = build_patched_system(system, PatchVector(v))
    patched_lv = build_patched_system(system, PatchVector(lam * v))
    # a point on the v-patch maps to the (lam*v)-patch after scaling by 1/lam
    p = np.array([0.1, -0.022, 0.461], dtype=complex)  # approximately on the quartic patch
    # project p onto the patch exactly first
    from tropic.tracker import newton_correct, CoordinateScale, TrackSettings

    h = CoordinateScale(patched_v, 0, p[0])
    p_exact, ok = newton_correct(h, p, 1.0, TrackSettings())
    assert ok
    scaled = p_exact / lam
    assert np.max(np.abs(patched_lv.evaluate(scaled))) < 1e-8


def test_patch_vector_rejects_zero_entries():
    with pytest.raises(ValueError):
        PatchVector(np.array([1.0, 0.0, 2.0]))


def test_draw_patch_real_bounds_and_determinism():
    v1 = draw_patch(4, real_only=True, seed=9)
    v2 = draw_patch(4, real_only=True, seed=9)
    assert np.array_equal(v1.v, v2.v)
    assert np.all((v1.v.real >= 0.5) & (v1.v.real <= 1.5))
    assert np.all(v1.v.imag == 0)
    vc = draw_patch(4, real_only=False, seed=9)
    assert np.allclose(np.abs(vc.v), 1.0)


def test_map_ray_back_published_values():
    assert map_ray_back((1, 2, 0)) == (-1, 1)
    assert map_ray_back((0, 2, 3)) == (-2, -3)
    assert map_ray_back((0, 1, 1)) == (-1, -1)


def test_map_ray_back_rejects_lineality():
    with pytest.raises(ValueError):
        map_ray_back((2, 2, 2))
    with pytest.raises(ValueError):
        map_ray_back((1, -1, 0))


def test_map_ray_back_preserves_primitivity():
    rng = np.random.default_rng(123)
    checked = 0
    while checked < 200:
        n = int(rng.integers(2, 7))
        r = rng.integers(0, 21, size=n)
        r[rng.integers(0, n)] = 0  # ensure a zero entry
        g = 0
        for x in r:
            g = math.gcd(g, int(x))
        if g != 1 or len(set(int(x) for x in r)) == 1:
            continue
        image = map_ray_back(tuple(int(x) for x in r))
        gg = 0
        for x in image:
            gg = math.gcd(gg, abs(int(x)))
        assert gg == 1, (r, image)
        checked += 1


def test_verify_patch_empty_boundary_vacuous():
    boundary = BoundaryPoints([], [], [], diverged=0)
    assert verify_patch(None, None, boundary)


def test_verify_patch_flags_divergence_and_unbounded_points():
    boundary = BoundaryPoints([np.array([0.0, 1.0, 0.5])], [0], [False], diverged=1)
    assert not verify_patch(None, None, boundary)
    boundary2 = BoundaryPoints([np.array([0.0, 1e9, 0.5])], [0], [False], diverged=0)
    assert not verify_patch(None, None, boundary2)
    boundary3 = BoundaryPoints([np.array([0.0, 1.0, 0.5])], [0], [False], diverged=0)
    assert verify_patch(None, None, boundary3)
