"""Polynomial representation, parsing, evaluation, differentiation, randomization."""

import numpy as np
import pytest

from tropic.errors import ParseError
from tropic.poly import (
    LinearForm,
    Polynomial,
    PolySystem,
    evaluate,
    homogenize,
    jacobian_eval,
    parse_system,
    randomize,
)

from oracles import brute_evaluate, finite_difference_jacobian, poly_support

SEXTIC = "vars: x,y\nf1 = x^6 - x^3 + y^2"


def test_parse_sextic():
    system = parse_system(SEXTIC)
    assert system.nvars == 2
    assert system.varnames == ("x", "y")
    p = system.polys[0]
    assert len(p.coeffs) == 3
    assert p.degree == 6
    assert poly_support(p) == [(0, 2), (3, 0), (6, 0)]


def test_parse_cancellation_gives_zero_polynomial():
    p = parse_system("vars: x\nf1 = x - x").polys[0]
    assert p.is_zero
    assert len(p.coeffs) == 0


def test_parse_merges_like_terms():
    p = parse_system("vars: x,y\nf1 = x*y + 2x*y").polys[0]
    assert poly_support(p) == [(1, 1)]
    assert p.coeffs[0] == pytest.approx(3.0)


def test_parse_rational_and_decimal_coefficients():
    p = parse_system("vars: x\nf = 3/2 x^2 - 2.5x + 1/4").polys[0]
    assert p.evaluate(np.array([2.0 + 0j])) == pytest.approx(6 - 5 + 0.25)


def test_parse_comments_and_blank_lines():
    text = "# header\n\nvars: x, y  # two vars\nf = x + y # sum\n"
    system = parse_system(text)
    assert system.varnames == ("x", "y")


def test_parse_unknown_variable_reports_position():
    with pytest.raises(ParseError) as err:
        parse_system("vars: x\nf1 = x + z^2")
    assert "z" in str(err.value)
    assert err.value.line == 2


def test_parse_syntax_error_has_line_and_column():
    with pytest.raises(ParseError) as err:
        parse_system("vars: x\nf1 = x + + ")
    assert err.value.line == 2
    assert err.value.column is not None


def test_parse_requires_vars_line():
    with pytest.raises(ParseError):
        parse_system("f1 = x + 1")


def test_evaluate_examples():
    system = parse_system("vars: x,y\nf = x + y")
    assert evaluate(system.polys[0], np.array([1, 2], dtype=complex)) == pytest.approx(3)
    sextic = parse_system(SEXTIC).polys[0]
    assert evaluate(sextic, np.array([1, 0], dtype=complex)) == pytest.approx(0)
    # 2^6 - 2^3 + 1 = 57
    assert evaluate(sextic, np.array([2, 1], dtype=complex)) == pytest.approx(57)


def test_evaluate_dimension_mismatch():
    sextic = parse_system(SEXTIC).polys[0]
    with pytest.raises(ValueError):
        sextic.evaluate(np.array([1.0, 2.0, 3.0], dtype=complex))


def test_evaluate_matches_brute_force_on_random_points():
    rng = np.random.default_rng(7)
    terms = {(3, 0, 1): 2.5, (0, 2, 0): -1.0, (1, 1, 1): 1j, (0, 0, 0): 0.25}
    exps = np.array(list(terms.keys()))
    p = Polynomial(3, exps, list(terms.values()))
    for _ in range(10):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert p.evaluate(z) == pytest.approx(brute_evaluate(terms, z), rel=1e-12)


def test_jacobian_examples():
    system = parse_system("vars: x,y\nf = x^2 + y")
    jac = jacobian_eval(system, np.array([3, 1], dtype=complex))
    assert jac == pytest.approx(np.array([[6, 1]]))
    system2 = parse_system("vars: x,y\nf = x*y\ng = x - y")
    jac2 = jacobian_eval(system2, np.array([1, 1], dtype=complex))
    assert jac2 == pytest.approx(np.array([[1, 1], [1, -1]]))
    sextic = parse_system(SEXTIC)
    grad = jacobian_eval(sextic, np.array([1, 1], dtype=complex))
    assert grad == pytest.approx(np.array([[3, 2]]))


def test_jacobian_matches_finite_differences_on_random_cubics():
    rng = np.random.default_rng(11)
    for _ in range(3):
        polys = []
        for _ in range(2):
            exps = []
            for i in range(4):
                for j in range(4 - i):
                    exps.append((i, j))
            coeffs = rng.normal(size=len(exps)) + 1j * rng.normal(size=len(exps))
            polys.append(Polynomial(2, np.array(exps), coeffs))
        system = PolySystem(2, polys)
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        numeric = finite_difference_jacobian(system.evaluate, z)
        assert np.max(np.abs(system.jacobian(z) - numeric)) < 1e-5 * max(1, np.max(np.abs(numeric)))


def test_homogenize_quartic_example():
    system = parse_system("vars: x,y\nf = x^3*y - x*y^3 + x^3 - y^2")
    hom = homogenize(system)
    assert hom.nvars == 3
    expected = parse_system("vars: x0,x,y\nf = x^3*y - x*y^3 + x0*x^3 - x0^2*y^2").polys[0]
    assert hom.polys[0] == expected


def test_homogenize_constant_and_linear():
    const = homogenize(parse_system("vars: x\nf = 5"))
    assert const.polys[0].degree == 0
    assert const.polys[0].evaluate(np.array([3, 9], dtype=complex)) == pytest.approx(5)
    lin = homogenize(parse_system("vars: x\nf = x + 1"))
    assert poly_support(lin.polys[0]) == [(0, 1), (1, 0)]


def test_homogenize_dehomogenizes_back():
    rng = np.random.default_rng(3)
    system = parse_system(SEXTIC)
    hom = homogenize(system)
    for _ in range(5):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        lifted = np.concatenate([[1.0 + 0j], z])
        a, b = hom.polys[0].evaluate(lifted), system.polys[0].evaluate(z)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


TWISTED_CUBIC = "vars: x,y,z\nf1 = y - x^2\nf2 = z - x*y\nf3 = y^2 - x*z"


def test_randomize_twisted_cubic_zero_set_contains_curve():
    system = parse_system(TWISTED_CUBIC)
    rand = randomize(system, 2, real_only=False, seed=5)
    assert len(rand.result.polys) == 2
    rng = np.random.default_rng(0)
    for _ in range(5):
        t = rng.normal() + 1j * rng.normal()
        point = np.array([t, t**2, t**3])
        assert np.max(np.abs(rand.result.evaluate(point))) < 1e-9 * max(1, abs(t) ** 4)


def test_randomize_identity_shortcut():
    system = parse_system(TWISTED_CUBIC)
    rand = randomize(system, 3, seed=42)
    assert np.array_equal(rand.matrix, np.eye(3))
    assert rand.result is system


def test_randomize_deterministic_and_row_combination():
    system = parse_system(TWISTED_CUBIC)
    r1 = randomize(system, 2, seed=9)
    r2 = randomize(system, 2, seed=9)
    assert np.array_equal(r1.matrix, r2.matrix)
    rng = np.random.default_rng(1)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    base_vals = system.evaluate(z)
    combo = r1.matrix @ base_vals
    assert np.max(np.abs(r1.result.evaluate(z) - combo)) < 1e-12 * max(1, np.max(np.abs(combo)))


def test_randomize_real_only_stays_real():
    system = parse_system(TWISTED_CUBIC)
    rand = randomize(system, 2, real_only=True, seed=3)
    assert rand.result.is_real
    assert np.all(rand.matrix.imag == 0)


def test_randomize_too_many_rows_rejected():
    system = parse_system(TWISTED_CUBIC)
    with pytest.raises(ValueError):
        randomize(system, 4)


def test_linear_form_roundtrip():
    form = LinearForm(np.array([1.0, 2.0]), 3.0)
    z = np.array([2.0, 0.5], dtype=complex)
    assert form.evaluate(z) == pytest.approx(0.0)
    assert form.as_polynomial().evaluate(z) == pytest.approx(0.0)


def test_polynomial_terms_are_canonical_and_immutable():
    p = Polynomial(2, np.array([[1, 0], [0, 1], [1, 0]]), [1.0, 2.0, -1.0])
    assert poly_support(p) == [(0, 1)]
    with pytest.raises(ValueError):
        p.exponents[0, 0] = 5
