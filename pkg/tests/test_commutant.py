import math

import numpy as np
import pytest

import circlefields as cf

TAU = cf.TAU


def test_decompose_two_degenerate_points():
    dec = cf.decompose(cf.VectorField(cf.one_minus_cos(2)))
    assert len(dec.degenerate_points) == 2
    assert dec.n_intervals == 2
    assert dec.degenerate_points[0] == pytest.approx(0.0, abs=1e-9)
    assert dec.degenerate_points[1] == pytest.approx(math.pi, abs=1e-9)


def test_decompose_no_degenerate_points():
    dec = cf.decompose(cf.VectorField(cf.sin_term(1)))
    assert dec.degenerate_points == ()
    assert dec.intervals == ((0.0, TAU),)


def test_decompose_single_degenerate_point():
    dec = cf.decompose(cf.VectorField(cf.one_minus_cos(1)))
    assert len(dec.degenerate_points) == 1
    assert dec.n_intervals == 1
    lo, hi = dec.intervals[0]
    assert hi - lo == pytest.approx(TAU)


def test_build_commuting_bracket_vanishes_symbolically():
    V = cf.VectorField(cf.one_minus_cos(2))
    W = cf.build_commuting(V, (1.0, -1.0))
    b = cf.bracket(V, W).coeff
    assert cf.coeff_distance(b, cf.TrigPoly()) < 1e-12
    assert isinstance(W.coeff, cf.PiecewiseTrig)


def test_build_commuting_c1_for_arbitrary_constants():
    rng = np.random.default_rng(51)
    V = cf.VectorField(cf.one_minus_cos(3))
    for _ in range(10):
        lams = tuple(rng.uniform(-5, 5, 3))
        W = cf.build_commuting(V, lams)
        vjump, djump = W.coeff.c1_defect()
        assert max(vjump, djump) < 1e-10


def test_equal_constants_give_multiple_of_v():
    V = cf.VectorField(cf.one_minus_cos(2))
    W = cf.build_commuting(V, (0.7, 0.7))
    diff = cf.lincomb(1.0, W.coeff, -0.7, V.coeff)
    assert cf.coeff_distance(diff, cf.TrigPoly()) < 1e-12
    assert not cf.linearly_independent((0.7, 0.7))
    assert cf.linearly_independent((1.0, -1.0))


def test_trivially_dependent_without_two_degenerate_points():
    with pytest.raises(cf.TriviallyDependent):
        cf.build_commuting(cf.VectorField(cf.sin_term(1)), (1.0,))
    with pytest.raises(cf.TriviallyDependent):
        cf.build_commuting(cf.VectorField(cf.one_minus_cos(1)), (1.0,))


def test_dimension_mismatch():
    V = cf.VectorField(cf.one_minus_cos(2))
    with pytest.raises(cf.DimensionMismatch):
        cf.build_commuting(V, (1.0,))
    with pytest.raises(cf.DimensionMismatch):
        cf.build_commuting(V, (1.0, 2.0, 3.0))


def test_parameter_count_matches_degenerate_points():
    for n in (2, 3, 4):
        dec = cf.decompose(cf.VectorField(cf.one_minus_cos(n)))
        assert dec.n_intervals == n
        assert len(dec.degenerate_points) == n


def test_commutant_numeric_residual_on_grid():
    V = cf.VectorField(cf.one_minus_cos(2))
    W = cf.build_commuting(V, (1.3, -0.2))
    b = cf.bracket(V, W).coeff
    assert cf.sup_diff(b, cf.TrigPoly(), 4096) < 1e-10


def test_independence_is_genuine():
    V = cf.VectorField(cf.one_minus_cos(2))
    W = cf.build_commuting(V, (1.0, -1.0))
    ts = cf.uniform_grid(256)
    vv = np.asarray(V.coeff.eval(ts))
    ww = np.asarray(W.coeff.eval(ts))
    gram = np.array([[vv @ vv, vv @ ww], [ww @ vv, ww @ ww]])
    norm = math.sqrt(gram[0, 0] * gram[1, 1])
    assert np.linalg.det(gram) / norm**2 > 1e-3
