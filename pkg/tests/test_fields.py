import math

import numpy as np
import pytest

import circlefields as cf
from _support import cyclic_distance, random_equivalence_map, random_positive_trigpoly, random_trigpoly

TAU = cf.TAU


def test_bracket_model_pair():
    V = cf.VectorField(cf.sin_term(1))
    W = cf.VectorField(cf.one_minus_cos(1))
    b = cf.bracket(V, W)
    assert cf.coeff_distance(b.coeff, W.coeff) < 1e-15


def test_bracket_antisymmetry_and_self():
    rng = np.random.default_rng(31)
    for _ in range(10):
        V = cf.VectorField(random_trigpoly(rng))
        W = cf.VectorField(random_trigpoly(rng))
        assert cf.bracket(V, V).coeff.is_zero(1e-12)
        ab = cf.bracket(V, W).coeff
        ba = cf.bracket(W, V).coeff
        assert cf.coeff_distance(ab, cf.lincomb(-1.0, ba, 0.0, cf.TrigPoly())) < 1e-12


def test_bracket_constant_field():
    V = cf.VectorField(cf.constant(1.0))
    W = cf.VectorField(cf.sin_term(1))
    assert cf.coeff_distance(cf.bracket(V, W).coeff, cf.cos_term(1)) < 1e-15


def test_bracket_bilinearity():
    rng = np.random.default_rng(32)
    for _ in range(10):
        a, b = rng.uniform(-3, 3, 2)
        f, g, h = (random_trigpoly(rng, degree=3) for _ in range(3))
        lhs = cf.bracket(cf.VectorField(a * f + b * g), cf.VectorField(h)).coeff
        rhs = a * cf.bracket(cf.VectorField(f), cf.VectorField(h)).coeff + b * cf.bracket(
            cf.VectorField(g), cf.VectorField(h)
        ).coeff
        assert cf.coeff_distance(lhs, rhs) < 1e-12


def test_pushforward_identity_and_rotation():
    W = cf.VectorField(cf.parse("1 - cos(t) + 0.3*sin(2*t)"))
    same = cf.pushforward(W, cf.identity())
    assert cf.coeff_distance(same.coeff, W.coeff) < 1e-15
    alpha = 1.3
    rot = cf.pushforward(W, cf.Rotation(alpha))
    ts = cf.uniform_grid(128)
    assert np.allclose(rot.coeff.eval(ts), W.coeff.eval(ts - alpha), atol=1e-12)


def test_pushforward_zero_count_preserved():
    rng = np.random.default_rng(33)
    W = cf.VectorField(cf.one_minus_cos(3))
    for _ in range(5):
        m = random_equivalence_map(rng)
        rep = cf.find_singular(cf.pushforward(W, m).coeff)
        assert rep.count == 3


def test_pushforward_matches_defining_relation():
    # w~(f(theta)) = w(theta) f'(theta) pointwise.
    W = cf.VectorField(cf.parse("1 - cos(2*t)"))
    m = cf.compose(cf.Rotation(0.8), cf.SinePerturbation(0.25, 1))
    Wt = cf.pushforward(W, m)
    for t in np.linspace(0.1, 6.1, 23):
        lhs = float(Wt.coeff.eval(float(m(t))))
        rhs = float(W.coeff.eval(t)) * m.deriv_s(float(t))
        assert abs(lhs - rhs) < 1e-10


def test_pushforward_analytic_derivative():
    W = cf.VectorField(cf.parse("1 - cos(2*t) + 0.1*sin(t)"))
    m = cf.compose(cf.Rotation(0.8), cf.SinePerturbation(0.2, 2))
    c = cf.pushforward(W, m).coeff
    d = c.deriv()
    h = 1e-6
    for y in np.linspace(0.05, 6.2, 17):
        fd = (float(c.eval(y + h)) - float(c.eval(y - h))) / (2 * h)
        assert abs(float(d.eval(y)) - fd) < 1e-6


def test_naturality_of_pushforward():
    V = cf.VectorField(cf.parse("sin(t) + 0.3*cos(2*t)"))
    W = cf.VectorField(cf.parse("1 - cos(t) + 0.2*sin(2*t)"))
    m = cf.compose(cf.Rotation(0.5), cf.SinePerturbation(0.2, 1))
    lhs = cf.pushforward(cf.bracket(V, W), m).coeff
    rhs = cf.bracket(cf.pushforward(V, m), cf.pushforward(W, m)).coeff
    assert cf.sup_diff(lhs, rhs, 1024) < 1e-6


def test_pushforward_grid_cache():
    W = cf.VectorField(cf.one_minus_cos(1))
    pf = cf.pushforward(W, cf.SinePerturbation(0.1, 1)).coeff
    vals = pf.grid_values(256)
    assert vals is pf.grid_values(256)
    assert np.allclose(vals, pf.eval(cf.uniform_grid(256)), atol=1e-14)


def test_solve_v_constant_coefficients():
    v, defect = cf.solve_v_given_w(cf.constant(1.0), 0.0)
    assert v(1.0) == pytest.approx(-1.0, abs=1e-10)
    assert defect == pytest.approx(-TAU, abs=1e-10)
    v2, defect2 = cf.solve_v_given_w(cf.constant(2.0), 0.0)
    assert v2(1.0) == pytest.approx(-1.0, abs=1e-10)
    assert defect2 == pytest.approx(-TAU, abs=1e-10)


def test_solve_v_closed_form_defect():
    w = cf.constant(2.0) + cf.cos_term(1)
    _, defect = cf.solve_v_given_w(w, 0.0)
    assert defect == pytest.approx(-TAU * math.sqrt(3.0), abs=1e-8)


def test_solve_v_lambda_shifts_solution():
    w = cf.constant(2.0) + cf.cos_term(1)
    v0, d0 = cf.solve_v_given_w(w, 0.0)
    v1, d1 = cf.solve_v_given_w(w, 1.5)
    assert d0 == pytest.approx(d1, abs=1e-12)
    t = 2.0
    assert v1(t) - v0(t) == pytest.approx(1.5 * float(w.eval(t)), abs=1e-9)


def test_solve_v_requires_nonvanishing():
    with pytest.raises(cf.HasZero):
        cf.solve_v_given_w(cf.sin_term(1), 0.0)


def test_no_periodic_solution_over_positive_w():
    rng = np.random.default_rng(34)
    for _ in range(20):
        w = random_positive_trigpoly(rng)
        _, defect = cf.solve_v_given_w(w, float(rng.uniform(-2, 2)))
        assert abs(defect) > 1e-3


def test_pushforward_zero_positions_track_map():
    W = cf.VectorField(cf.one_minus_cos(2))
    m = cf.compose(cf.Rotation(0.8), cf.SinePerturbation(0.3, 1))
    rep = cf.find_singular(cf.pushforward(W, m).coeff)
    images = sorted(float(m(z)) for z in (0.0, math.pi))
    assert rep.count == 2
    for z, img in zip(rep.thetas(), images):
        assert cyclic_distance(z, img) < 1e-8
