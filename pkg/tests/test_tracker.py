"""Path tracking: straight segments, monodromy circles, coordinate loops."""

import numpy as np
import pytest

from tropic.poly import LinearForm, PolySystem, parse_system
from tropic.tracker import (
    ConvexCombination,
    CoordinateScale,
    SlidingForm,
    TrackSettings,
    parameter_loop,
    track,
    track_coordinate_circle,
)


class SquareRootFamily:
    """H(x, t) = x^2 - t: explicit branches +/- sqrt(t)."""

    nvars = 1

    def evaluate(self, x, t):
        return np.array([x[0] ** 2 - t])

    def jacobian_x(self, x, t):
        return np.array([[2 * x[0]]])

    def dt(self, x, t):
        return np.array([-1.0 + 0j])


def test_track_explicit_square_root_branch():
    res = track(SquareRootFamily(), np.array([1.0 + 0j]), 1.0, 4.0)
    assert res.success
    assert res.end[0] == pytest.approx(2.0, abs=1e-9)


def test_track_full_parameter_circle_swaps_branches():
    samples = parameter_loop(SquareRootFamily(), np.array([1.0 + 0j]), 1.0, m=16, c_max=4)
    assert samples.c == 2
    # halfway through (t = e^{2 pi i}) the branch has flipped sign
    assert samples.points[16][0] == pytest.approx(-1.0, abs=1e-6)
    assert samples.points[32][0] == pytest.approx(1.0, abs=1e-6)


def test_track_linear_single_step():
    # H(x, t) = t*x + (1-t)*(x - 1): the path x = 1 - t
    h = SlidingForm(
        PolySystem(1, [], ("x",)),
        LinearForm(np.array([1.0]), 0.0),
        LinearForm(np.array([1.0]), 1.0),
    )
    settings = TrackSettings(step_initial=1.0, step_max=1.0)
    res = track(h, np.array([0.0 + 0j]), 1.0, 0.0, settings)
    assert res.success
    assert res.steps == 1
    assert res.end[0] == pytest.approx(1.0, abs=1e-12)


def test_track_reversibility():
    rng = np.random.default_rng(2)
    target = parse_system("vars: x,y\nf = x^3 + 2x*y - 1\ng = y^2 - x + 3")
    start = parse_system("vars: x,y\nf = x^3 - 1\ng = y^2 - 1")
    h = ConvexCombination(target, start, gamma=np.exp(0.7j))
    settings = TrackSettings()
    x0 = np.array([1.0 + 0j, 1.0 + 0j])
    forward = track(h, x0, 1.0, 0.0, settings)
    assert forward.success
    back = track(h, forward.end, 0.0, 1.0, settings)
    assert back.success
    assert np.max(np.abs(back.end - x0)) < 10 * settings.newton_tol


def test_track_determinism_bit_for_bit():
    target = parse_system("vars: x,y\nf = x^3 + 2x*y - 1\ng = y^2 - x + 3")
    start = parse_system("vars: x,y\nf = x^3 - 1\ng = y^2 - 1")
    h = ConvexCombination(target, start, gamma=np.exp(0.7j))
    x0 = np.array([1.0 + 0j, 1.0 + 0j])
    a = track(h, x0, 1.0, 0.0)
    b = track(h, x0, 1.0, 0.0)
    assert np.array_equal(a.end, b.end)
    assert a.steps == b.steps


def test_track_divergence_detection():
    # x * t = 1: as t -> 0 the solution escapes to infinity
    class Reciprocal:
        nvars = 1

        def evaluate(self, x, t):
            return np.array([x[0] * t - 1.0])

        def jacobian_x(self, x, t):
            return np.array([[t]])

        def dt(self, x, t):
            return np.array([x[0]])

    res = track(Reciprocal(), np.array([1.0 + 0j]), 1.0, 0.0, TrackSettings(divergence_norm=1e6))
    assert res.status == "diverged"


def test_coordinate_circle_on_graph_closes_after_one_loop():
    curve = parse_system("vars: x,y\nf = y - x")
    p = np.array([0.1 + 0j, 0.1 + 0j])
    samples = track_coordinate_circle(curve, 0, 0.1, p, vertices_per_loop=16, loops_max=3)
    assert samples.c == 1
    assert samples.points.shape == (17, 2)
    assert np.max(np.abs(samples.points[0] - samples.points[-1])) < 1e-6


def test_coordinate_circle_square_root_branch():
    curve = parse_system("vars: x,y\nf = y^2 - x")
    p = np.array([0.04 + 0j, 0.2 + 0j])
    samples = track_coordinate_circle(curve, 0, 0.04, p, vertices_per_loop=16, loops_max=4)
    assert samples.c == 2
    # after one loop of x the y-branch has flipped
    assert samples.points[16][1] == pytest.approx(-0.2, abs=1e-6)


def test_coordinate_circle_negative_radius():
    curve = parse_system("vars: x,y\nf = y - x^2")
    p = np.array([-0.1 + 0j, 0.01 + 0j])
    samples = track_coordinate_circle(curve, 0, -0.1, p, vertices_per_loop=16, loops_max=3)
    assert samples.c == 1
    assert samples.points[0][0] == pytest.approx(-0.1)


def test_coordinate_scale_frozen_system():
    curve = parse_system("vars: x,y\nf = y - x")
    h = CoordinateScale(curve, 0, 0.5)
    frozen = h.frozen_system(1.0)
    assert np.max(np.abs(frozen.evaluate(np.array([0.5, 0.5], dtype=complex)))) < 1e-14


def test_settings_validation():
    with pytest.raises(ValueError):
        TrackSettings(step_min=1.0, step_initial=0.1)
