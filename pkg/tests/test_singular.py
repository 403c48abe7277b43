import math

import numpy as np
import pytest

import circlefields as cf
from _support import cyclic_distance, random_equivalence_map

TAU = cf.TAU


def test_double_zeros_of_model_coefficient():
    rep = cf.find_singular(cf.one_minus_cos(2))
    assert rep.count == 2
    assert all(p.degenerate for p in rep.points)
    assert rep.class_c
    assert np.max(cyclic_distance(rep.thetas(), [0.0, math.pi])) < 1e-9


def test_simple_zeros_of_sine():
    rep = cf.find_singular(cf.sin_term(1))
    assert rep.count == 2
    assert not any(p.degenerate for p in rep.points)
    assert np.max(cyclic_distance(rep.thetas(), [0.0, math.pi])) < 1e-12


def test_zero_interval_raises_not_class_c():
    q = cf.multiply(cf.one_minus_cos(1).shift(1.0), cf.one_minus_cos(1).shift(2.0))
    pw = cf.PiecewiseTrig([1.0, 2.0], [cf.TrigPoly(), q])
    with pytest.raises(cf.NotClassC) as exc:
        cf.find_singular(pw)
    ranges = exc.value.report.interval_zero_ranges
    assert len(ranges) == 1
    assert ranges[0] == pytest.approx((1.0, 2.0))
    assert not exc.value.report.class_c


def test_identically_zero_field_not_class_c():
    with pytest.raises(cf.NotClassC):
        cf.find_singular(cf.TrigPoly())


def test_canonical_grid_zeros_all_n():
    for n in range(1, 7):
        rep = cf.find_singular(cf.one_minus_cos(n, -1.0))
        assert rep.count == n
        grid = cf.SingularGrid(n).points
        for z in rep.thetas():
            assert np.min(cyclic_distance(z, grid)) < 1e-9
        assert all(p.degenerate for p in rep.points)


def test_is_degenerate():
    assert cf.is_degenerate(cf.one_minus_cos(1), 0.0)
    assert not cf.is_degenerate(cf.sin_term(1), 0.0)
    with pytest.raises(cf.NotAZero):
        cf.is_degenerate(cf.sin_term(1), 1.0)


def test_canonical_pair_zeros_degenerate_for_w():
    rng = np.random.default_rng(41)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        pair = cf.CanonicalPair(
            n,
            tuple(rng.uniform(-2, 2, n)),
            tuple(int(s) for s in rng.choice([-1, 1], n)),
        )
        w = pair.w_coeff()
        for k in range(n):
            assert cf.is_degenerate(w, cf.SingularGrid(n).point(k))


def test_zeros_of_w_subset_of_zeros_of_v():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(1, 6))
        pair = cf.CanonicalPair(
            n,
            tuple(rng.uniform(-2, 2, n)),
            tuple(int(s) for s in rng.choice([-1, 1], n)),
        )
        wz = cf.find_singular(pair.w_coeff()).thetas()
        vz = cf.find_singular(pair.v_coeff()).thetas()
        for z in wz:
            assert np.min(cyclic_distance(z, vz)) < 1e-8


def test_zero_count_invariant_under_maps():
    rng = np.random.default_rng(43)
    W = cf.VectorField(cf.one_minus_cos(4))
    base = cf.find_singular(W.coeff).count
    for _ in range(5):
        m = random_equivalence_map(rng)
        assert cf.find_singular(cf.pushforward(W, m).coeff).count == base


def test_mixed_order_zeros():
    # sin(t)*(1-cos(t)): order-3 zero at 0 (degenerate), simple at pi.
    f = cf.multiply(cf.sin_term(1), cf.one_minus_cos(1))
    rep = cf.find_singular(f)
    assert rep.count == 2
    flags = {round(p.theta, 6): p.degenerate for p in rep.points}
    assert flags[0.0] is True or flags.get(round(TAU, 6)) is True
    assert flags[round(math.pi, 6)] is False


def test_report_serialization():
    rep = cf.find_singular(cf.sin_term(1))
    d = rep.to_dict()
    assert d["count"] == 2
    assert d["class_c"] is True
    assert len(d["points"]) == 2
    assert d["interval_zero_ranges"] == []
