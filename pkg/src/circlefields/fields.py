"""Vector fields on the circle: brackets, pushforwards, commutation solve.

A field is a coefficient v(theta) of v(theta) d/dtheta.  The bracket
convention is fixed so that [V, W] has coefficient v*w' - v'*w.
Pushforwards under a coordinate change f carry w to the coefficient
w~ with w~(f(theta)) = w(theta) * f'(theta).
"""

from __future__ import annotations

import numpy as np

from .maps import CircleMap, Rotation
from .quadrature import adaptive_simpson
from .trig import (
    TAU,
    NumericPeriodic,
    PeriodicFunction,
    PiecewiseTrig,
    TrigPoly,
    as_periodic,
    reduce_angle,
    uniform_grid,
)


class HasZero(ValueError):
    """The coefficient vanishes somewhere but was required not to."""


class VectorField:
    """v(theta) d/dtheta, wrapping a periodic coefficient."""

    __slots__ = ("coeff",)

    def __init__(self, coeff):
        object.__setattr__(self, "coeff", as_periodic(coeff))

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    def __repr__(self):
        return f"VectorField({self.coeff!r})"


def bracket(V: VectorField, W: VectorField) -> VectorField:
    """[V, W] with coefficient v*w' - v'*w; exact for exact coefficients."""
    v, w = V.coeff, W.coeff
    return VectorField(v * w.deriv() - v.deriv() * w)


class PushforwardFunction(PeriodicFunction):
    """Coefficient of a field transported through a circle map.

    Values are computed exactly through the inverse map; a uniform grid
    cache (4096 points) is filled lazily for refitting and fast scans.
    The derivative is analytic: w~'(y) = w'(x) + w(x) f''(x)/f'(x) with
    x = f^{-1}(y).
    """

    __slots__ = ("base", "fmap", "inv", "_cache")

    def __init__(self, base: PeriodicFunction, fmap: CircleMap, inv: CircleMap | None = None):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fmap", fmap)
        object.__setattr__(self, "inv", inv if inv is not None else fmap.invert())
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("PushforwardFunction is immutable")

    def eval(self, theta):
        if np.ndim(theta) == 0:
            x = self.inv.lift_s(float(reduce_angle(theta)))
            return self.base.eval(x) * self.fmap.deriv_s(x)
        x = np.asarray(self.inv.lift(reduce_angle(theta)))
        return np.asarray(self.base.eval(x)) * np.asarray(self.fmap.deriv(x))

    def deriv(self) -> PeriodicFunction:
        return _PushforwardDeriv(self)

    def grid_values(self, n: int = 4096) -> np.ndarray:
        # Lazy, idempotent fill; subsequent reads share the array.
        if n not in self._cache:
            self._cache[n] = np.asarray(self.eval(uniform_grid(n)))
        return self._cache[n]


class _PushforwardDeriv(PeriodicFunction):
    __slots__ = ("pf", "base_deriv")

    def __init__(self, pf: PushforwardFunction):
        object.__setattr__(self, "pf", pf)
        object.__setattr__(self, "base_deriv", pf.base.deriv())

    def __setattr__(self, name, value):
        raise AttributeError("immutable")

    def eval(self, theta):
        pf = self.pf
        scalar = np.ndim(theta) == 0
        if scalar:
            x = pf.inv.lift_s(float(reduce_angle(theta)))
            f1 = pf.fmap.deriv_s(x)
            wd = self.base_deriv.eval(x)
            if abs(f1) < 1e-12:
                # At the map's critical points the correction term has a
                # finite limit; the plain w' value is the right one there.
                return wd
            return wd + pf.base.eval(x) * pf.fmap.deriv2_s(x) / f1
        x = np.asarray(pf.inv.lift(reduce_angle(theta)))
        f1 = np.asarray(pf.fmap.deriv(x))
        wd = np.asarray(self.base_deriv.eval(x))
        w0 = np.asarray(pf.base.eval(x))
        f2 = np.asarray(pf.fmap.deriv2(x))
        safe = np.abs(f1) >= 1e-12
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(safe, w0 * f2 / np.where(safe, f1, 1.0), 0.0)
        return wd + corr

    def deriv(self):
        # Second derivatives of pushforwards are only needed incidentally.
        h = 1e-6
        return NumericPeriodic(
            lambda t: (self.eval(np.mod(t + h, TAU)) - self.eval(np.mod(t - h, TAU))) / (2.0 * h)
        )


def pushforward(X: VectorField, fmap: CircleMap) -> VectorField:
    """Transport X through fmap; exact coefficient shift for rotations."""
    c = X.coeff
    if isinstance(fmap, Rotation) and isinstance(c, (TrigPoly, PiecewiseTrig)):
        return VectorField(c.shift(fmap.alpha))
    return VectorField(PushforwardFunction(c, fmap))


def bracket_residual(V: VectorField, W: VectorField, n: int = 4096) -> float:
    """sup |coeff([V,W]) - coeff(W)| over an n-point uniform grid."""
    grid = uniform_grid(n)
    b = bracket(V, W).coeff
    return float(np.max(np.abs(np.asarray(b.eval(grid)) - np.asarray(W.coeff.eval(grid)))))


def solve_v_given_w(w: PeriodicFunction, lam: float, tol: float = 1e-10):
    """Solve v*w' - v'*w = w for v when w never vanishes.

    Returns ``(v, defect)`` where v is the branch
    v(theta) = (lambda - int_0^theta ds/w(s)) * w(theta) on [0, 2*pi) and
    ``defect = v(2*pi-) - v(0) = -w(0) * int_0^{2*pi} ds/w``.  A nonzero
    defect certifies that no periodic v exists over this w.
    """
    w = as_periodic(w)
    samples = np.asarray(w.eval(uniform_grid(8192)))
    if float(np.min(np.abs(samples))) < 1e-8:
        raise HasZero("coefficient vanishes (or nearly vanishes) on the circle")

    def inv_w(t: float) -> float:
        return 1.0 / w.eval(t)

    total = adaptive_simpson(inv_w, 0.0, TAU, tol=tol)
    w0 = float(w.eval(0.0))
    defect = -w0 * total

    def v(theta):
        if np.ndim(theta) == 0:
            t = float(theta)
            if not 0.0 <= t < TAU:
                t = float(reduce_angle(t))
            q = adaptive_simpson(inv_w, 0.0, t, tol=tol)
            return (lam - q) * float(w.eval(t))
        return np.asarray([v(float(t)) for t in np.asarray(theta).ravel()]).reshape(np.shape(theta))

    return v, defect
