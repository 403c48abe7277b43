"""Interval-collapsing homotopies of the circle.

These are not equivalence transformations: at t = 1 the family stops
being injective, which is exactly what lets an interval of zeros of a
field coefficient be constricted to a single point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import VectorField
from .trig import TAU, NumericPeriodic, PiecewiseTrig, TrigPoly, reduce_angle


class NotZeroOnInterval(ValueError):
    """The coefficient is not identically zero on the requested interval."""


@dataclass(frozen=True)
class Homotopy:
    """Family F(t, theta) collapsing [theta1, theta2] as t goes 0 -> 1."""

    theta1: float
    theta2: float

    def __post_init__(self):
        if not (0.0 <= self.theta1 < self.theta2 < TAU):
            raise ValueError("need 0 <= theta1 < theta2 < 2*pi")

    def __call__(self, t: float, theta):
        return homotopy_apply(self, t, theta)


def homotopy_apply(h: Homotopy, t: float, theta):
    """Evaluate the collapsing family; piecewise linear in theta."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("homotopy parameter t must lie in [0, 1]")
    th = reduce_angle(np.asarray(theta, dtype=float))
    t1, t2 = h.theta1, h.theta2
    if t1 != 0.0:
        out = np.where(
            th < t1,
            th + t * (th / t1) * (t2 - t1),
            np.where(th < t2, th + t * (t2 - th), th),
        )
    else:
        out = np.where(
            th < t2,
            th * (1.0 - t),
            th - t * ((TAU - th) / (TAU - t2)) * t2,
        )
    return float(out) if np.ndim(theta) == 0 else out


def _zero_on_interval(coeff, theta1: float, theta2: float, tol: float = 1e-9) -> bool:
    probes = np.linspace(theta1, theta2, 512)[1:-1]
    if np.max(np.abs(np.asarray(coeff.eval(probes)))) >= tol:
        return False
    if isinstance(coeff, TrigPoly):
        # A nonzero trig polynomial cannot vanish on an interval.
        return coeff.is_zero()
    if isinstance(coeff, PiecewiseTrig):
        for j, p in enumerate(coeff.pieces):
            lo, hi = coeff.interval(j)
            overlap = min(hi, theta2) - max(lo, theta1)
            if overlap > 1e-12 and not p.is_zero():
                return False
    return True


def contract_interval(X: VectorField, theta1: float, theta2: float) -> VectorField:
    """Collapse an interval on which X vanishes identically.

    Returns the transported field on the collapsed circle; the former
    interval of zeros becomes a single zero point.  A degenerate request
    (theta1 == theta2) returns X unchanged, and the identically-zero
    field collapses to the zero field without complaint.
    """
    theta1 = float(theta1)
    theta2 = float(theta2)
    if theta1 == theta2:
        return X
    coeff = X.coeff
    if isinstance(coeff, (TrigPoly, PiecewiseTrig)) and coeff.is_zero():
        return VectorField(TrigPoly())
    if not _zero_on_interval(coeff, theta1, theta2):
        raise NotZeroOnInterval(f"coefficient is not zero on ({theta1}, {theta2})")

    if theta1 != 0.0:
        # Collapse point is theta2: [0, theta1) stretches over [0, theta2).
        s = theta2 / theta1

        def fn(th):
            th = np.asarray(th, dtype=float)
            inner = th < theta2
            src = np.where(inner, th / s, th)
            return np.where(inner, s, 1.0) * np.asarray(coeff.eval(src))

        def dfn(th):
            th = np.asarray(th, dtype=float)
            inner = th < theta2
            src = np.where(inner, th / s, th)
            return np.asarray(coeff.deriv().eval(src))

    else:
        # Collapse point is 0: [theta2, 2*pi) stretches over the circle.
        s = TAU / (TAU - theta2)

        def fn(th):
            th = np.asarray(th, dtype=float)
            src = theta2 + th / s
            return s * np.asarray(coeff.eval(src))

        def dfn(th):
            th = np.asarray(th, dtype=float)
            return np.asarray(coeff.deriv().eval(theta2 + th / s))

    return VectorField(NumericPeriodic(fn, dfn))
