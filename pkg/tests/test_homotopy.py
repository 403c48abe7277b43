import math

import numpy as np
import pytest

import circlefields as cf

TAU = cf.TAU


def test_identity_at_t_zero():
    h = cf.Homotopy(1.0, 2.0)
    ts = np.linspace(0, TAU, 33, endpoint=False)
    assert np.allclose(cf.homotopy_apply(h, 0.0, ts), ts, atol=1e-15)
    h0 = cf.Homotopy(0.0, 2.0)
    assert np.allclose(cf.homotopy_apply(h0, 0.0, ts), ts, atol=1e-15)


def test_collapse_cases_at_t_one():
    h = cf.Homotopy(1.0, 2.0)
    for theta in (1.0, 1.5, 1.999):
        assert cf.homotopy_apply(h, 1.0, theta) == pytest.approx(2.0, abs=1e-12)
    assert cf.homotopy_apply(h, 1.0, 2.5) == 2.5
    h0 = cf.Homotopy(0.0, 2.0)
    for theta in (0.0, 1.0, 1.999):
        assert cf.homotopy_apply(h0, 1.0, theta) == pytest.approx(0.0, abs=1e-12)


def test_interpolation_is_continuous_in_theta():
    h = cf.Homotopy(1.0, 2.0)
    for t in (0.3, 0.8):
        ts = np.linspace(0, TAU, 4096, endpoint=False)
        vals = cf.homotopy_apply(h, t, ts)
        assert np.max(np.abs(np.diff(vals))) < 0.02


def test_parameter_validation():
    with pytest.raises(ValueError):
        cf.Homotopy(2.0, 1.0)
    h = cf.Homotopy(1.0, 2.0)
    with pytest.raises(ValueError):
        cf.homotopy_apply(h, 1.5, 0.0)


def _field_zero_on(lo, hi):
    q = cf.multiply(cf.one_minus_cos(1).shift(lo), cf.one_minus_cos(1).shift(hi))
    return cf.VectorField(cf.PiecewiseTrig([lo, hi], [cf.TrigPoly(), q]))


def test_contract_interval_removes_zero_interval():
    X = _field_zero_on(1.0, 2.0)
    Y = cf.contract_interval(X, 1.0, 2.0)
    rep = cf.find_singular(Y.coeff)
    assert rep.class_c
    assert rep.count == 1
    assert rep.points[0].theta == pytest.approx(2.0, abs=1e-6)


def test_contract_interval_theta1_zero_case():
    lo, hi = 0.0, 1.5
    q = cf.multiply(cf.one_minus_cos(1), cf.one_minus_cos(1).shift(hi))
    X = cf.VectorField(cf.PiecewiseTrig([lo, hi], [cf.TrigPoly(), q]))
    Y = cf.contract_interval(X, lo, hi)
    rep = cf.find_singular(Y.coeff)
    assert rep.class_c
    assert rep.count == 1
    assert min(rep.points[0].theta, TAU - rep.points[0].theta) < 1e-6


def test_contract_degenerate_request_returns_input():
    X = cf.VectorField(cf.sin_term(1))
    assert cf.contract_interval(X, 1.0, 1.0) is X


def test_contract_zero_field_returns_zero_field():
    X = cf.VectorField(cf.TrigPoly())
    Y = cf.contract_interval(X, 1.0, 2.0)
    assert isinstance(Y.coeff, cf.TrigPoly)
    assert Y.coeff.is_zero()


def test_contract_rejects_nonzero_interval():
    X = cf.VectorField(cf.sin_term(1))
    with pytest.raises(cf.NotZeroOnInterval):
        cf.contract_interval(X, 1.0, 2.0)


def test_contracted_field_is_c1_at_collapse_point():
    X = _field_zero_on(1.0, 2.0)
    Y = cf.contract_interval(X, 1.0, 2.0)
    d = Y.coeff.deriv()
    jump = abs(float(d.eval(2.0 - 1e-6)) - float(d.eval(2.0 + 1e-6)))
    assert jump < 1e-4
