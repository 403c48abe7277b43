"""Piecewise-C1 equivalence transformations of the circle.

Every map is stored through a monotone lift F with F(x + 2*pi) =
F(x) + 2*pi*degree; the circle map itself is F reduced mod 2*pi and is
normalized to f(0) = 0 for every family except rotations.  Maps are
immutable; composition and inversion return new objects.

Scalar fast paths (``lift_s`` / ``deriv_s``) exist because quadrature and
root refinement evaluate maps point by point in tight loops.
"""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

from .trig import TAU, reduce_angle, uniform_grid


class CircleMap:
    """Base class: a one-to-one degree +/-1 self-map of the circle."""

    degree: int = 1
    breakpoints: tuple = ()

    # -- lift interface -------------------------------------------------
    def _lift0(self, r):
        """Lift values for r in [0, 2*pi); vectorized."""
        raise NotImplementedError

    def _deriv0(self, r):
        raise NotImplementedError

    def _deriv20(self, r):
        raise NotImplementedError

    def lift(self, x):
        x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        r = np.mod(x, TAU)
        return self._lift0(r) + (x - r) * self.degree

    def deriv(self, x):
        return self._deriv0(np.mod(x, TAU))

    def deriv2(self, x):
        return self._deriv20(np.mod(x, TAU))

    # Scalar fast paths; subclasses override the _s hooks where it pays.
    def lift_s(self, x: float) -> float:
        r = x % TAU
        return self._lift0_s(r) + (x - r) * self.degree

    def deriv_s(self, x: float) -> float:
        return self._deriv0_s(x % TAU)

    def deriv2_s(self, x: float) -> float:
        return float(self._deriv20(x % TAU))

    def _lift0_s(self, r: float) -> float:
        return float(self._lift0(r))

    def _deriv0_s(self, r: float) -> float:
        return float(self._deriv0(r))

    def __call__(self, x):
        out = np.mod(self.lift(x), TAU)
        return float(out) if np.ndim(x) == 0 else out

    def call_s(self, x: float) -> float:
        return self.lift_s(x) % TAU

    # -- structure ------------------------------------------------------
    def invert(self) -> "CircleMap":
        return InverseMap(self)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def deriv_sided(self, x: float) -> tuple[float, float]:
        """Left/right derivative limits (they differ only at breakpoints)."""
        d = float(self.deriv(x))
        return d, d


class Rotation(CircleMap):
    """theta -> theta + alpha (mod 2*pi); the only family with f(0) != 0."""

    def __init__(self, alpha: float):
        self.alpha = float(reduce_angle(alpha))

    def _lift0(self, r):
        return r + self.alpha

    def _lift0_s(self, r):
        return r + self.alpha

    def _deriv0(self, r):
        return np.ones_like(np.asarray(r, dtype=float)) if np.ndim(r) else 1.0

    def _deriv0_s(self, r):
        return 1.0

    def _deriv20(self, r):
        return np.zeros_like(np.asarray(r, dtype=float)) if np.ndim(r) else 0.0

    def invert(self):
        return Rotation(-self.alpha)

    def to_dict(self):
        return {"kind": "rotation", "alpha": self.alpha}

    def __repr__(self):
        return f"Rotation({self.alpha!r})"


def identity() -> Rotation:
    return Rotation(0.0)


class Reflection(CircleMap):
    """theta -> -theta (mod 2*pi); the basic orientation-reversing map."""

    degree = -1

    def _lift0(self, r):
        return -np.asarray(r, dtype=float) if np.ndim(r) else -r

    def _lift0_s(self, r):
        return -r

    def _deriv0(self, r):
        return -np.ones_like(np.asarray(r, dtype=float)) if np.ndim(r) else -1.0

    def _deriv0_s(self, r):
        return -1.0

    def _deriv20(self, r):
        return np.zeros_like(np.asarray(r, dtype=float)) if np.ndim(r) else 0.0

    def invert(self):
        return Reflection()

    def to_dict(self):
        return {"kind": "reflection"}

    def __repr__(self):
        return "Reflection()"


class SinePerturbation(CircleMap):
    """theta -> theta + eps*sin(k*theta); monotone when |eps*k| < 1."""

    def __init__(self, eps: float, k: int = 1):
        k = int(k)
        if k < 1:
            raise ValueError("harmonic k must be a positive integer")
        if abs(eps) * k >= 1.0:
            raise ValueError("need |eps|*k < 1 for a strictly monotone map")
        self.eps = float(eps)
        self.k = k

    def _lift0(self, r):
        return r + self.eps * np.sin(self.k * r)

    def _lift0_s(self, r):
        return r + self.eps * math.sin(self.k * r)

    def _deriv0(self, r):
        return 1.0 + self.eps * self.k * np.cos(self.k * r)

    def _deriv0_s(self, r):
        return 1.0 + self.eps * self.k * math.cos(self.k * r)

    def _deriv20(self, r):
        return -self.eps * self.k * self.k * np.sin(self.k * r)

    def to_dict(self):
        return {"kind": "perturbed", "eps": self.eps, "k": self.k}

    def __repr__(self):
        return f"SinePerturbation(eps={self.eps!r}, k={self.k})"


class PiecewiseAffineMap(CircleMap):
    """Monotone piecewise-linear map sending src knots to dst knots.

    Both knot lists must start at 0 (use a rotation first otherwise); the
    closing piece maps [src[-1], 2*pi] onto [dst[-1], 2*pi].  Exactly
    invertible; the derivative jumps at the knots.
    """

    def __init__(self, src, dst):
        src = np.asarray(src, dtype=float).ravel()
        dst = np.asarray(dst, dtype=float).ravel()
        if src.size != dst.size or src.size == 0:
            raise ValueError("src and dst knot lists must match and be nonempty")
        if src[0] != 0.0 or dst[0] != 0.0:
            raise ValueError("knot lists must start at 0 (compose with a rotation)")
        if np.any(np.diff(src) <= 0) or np.any(np.diff(dst) <= 0):
            raise ValueError("knots must be strictly increasing")
        if src[-1] >= TAU or dst[-1] >= TAU:
            raise ValueError("knots must lie in [0, 2*pi)")
        self.src = np.concatenate([src, [TAU]])
        self.dst = np.concatenate([dst, [TAU]])
        self.slopes = np.diff(self.dst) / np.diff(self.src)
        self.breakpoints = tuple(src)
        self._src_list = list(self.src)

    def _lift0(self, r):
        return np.interp(r, self.src, self.dst)

    def _lift0_s(self, r):
        j = bisect_right(self._src_list, r) - 1
        j = min(max(j, 0), len(self.slopes) - 1)
        return self.dst[j] + self.slopes[j] * (r - self.src[j])

    def _piece(self, r):
        idx = np.searchsorted(self.src, r, side="right") - 1
        return np.clip(idx, 0, len(self.slopes) - 1)

    def _deriv0(self, r):
        return self.slopes[self._piece(r)]

    def _deriv0_s(self, r):
        j = bisect_right(self._src_list, r) - 1
        return float(self.slopes[min(max(j, 0), len(self.slopes) - 1)])

    def _deriv20(self, r):
        return np.zeros_like(np.asarray(r, dtype=float)) if np.ndim(r) else 0.0

    def deriv_sided(self, x):
        r = float(reduce_angle(x))
        j = bisect_right(self._src_list, r) - 1
        j = min(max(j, 0), len(self.slopes) - 1)
        right = float(self.slopes[j])
        if abs(r - self.src[j]) < 1e-15:
            left = float(self.slopes[(j - 1) % len(self.slopes)])
        else:
            left = right
        return left, right

    def invert(self):
        return PiecewiseAffineMap(self.dst[:-1], self.src[:-1])

    def to_dict(self):
        return {"kind": "affine", "src": list(self.src[:-1]), "dst": list(self.dst[:-1])}

    def __repr__(self):
        return f"PiecewiseAffineMap({list(self.src[:-1])!r} -> {list(self.dst[:-1])!r})"


class ComposedMap(CircleMap):
    """outer after inner: theta -> outer(inner(theta))."""

    def __init__(self, outer: CircleMap, inner: CircleMap):
        self.outer = outer
        self.inner = inner
        self.degree = outer.degree * inner.degree

    def _lift0(self, r):
        return self.outer.lift(self.inner._lift0(r))

    def lift(self, x):
        return self.outer.lift(self.inner.lift(x))

    def lift_s(self, x):
        return self.outer.lift_s(self.inner.lift_s(x))

    def deriv(self, x):
        gx = self.inner.lift(x)
        return self.outer.deriv(gx) * self.inner.deriv(x)

    def deriv_s(self, x):
        gx = self.inner.lift_s(x)
        return self.outer.deriv_s(gx) * self.inner.deriv_s(x)

    def deriv2(self, x):
        gx = self.inner.lift(x)
        g1 = self.inner.deriv(x)
        return self.outer.deriv2(gx) * g1 * g1 + self.outer.deriv(gx) * self.inner.deriv2(x)

    def deriv2_s(self, x):
        gx = self.inner.lift_s(x)
        g1 = self.inner.deriv_s(x)
        return self.outer.deriv2_s(gx) * g1 * g1 + self.outer.deriv_s(gx) * self.inner.deriv2_s(x)

    def invert(self):
        return ComposedMap(self.inner.invert(), self.outer.invert())

    def to_dict(self):
        return {"kind": "compose", "maps": [self.outer.to_dict(), self.inner.to_dict()]}

    def __repr__(self):
        return f"ComposedMap({self.outer!r}, {self.inner!r})"


def compose(outer: CircleMap, inner: CircleMap) -> CircleMap:
    """outer o inner, with trivial simplifications."""
    if isinstance(outer, Rotation) and isinstance(inner, Rotation):
        return Rotation(outer.alpha + inner.alpha)
    if isinstance(outer, Rotation) and outer.alpha == 0.0:
        return inner
    if isinstance(inner, Rotation) and inner.alpha == 0.0:
        return outer
    return ComposedMap(outer, inner)


class InverseMap(CircleMap):
    """Numeric inverse of a monotone lift (bisection / safeguarded Newton)."""

    def __init__(self, base: CircleMap):
        self.base = base
        self.degree = base.degree
        xs = uniform_grid(256)
        p = np.asarray(base.lift(xs)) - base.degree * xs
        self._bound = float(np.max(np.abs(p))) + 1.0

    def _solve_s(self, y: float) -> float:
        base, d = self.base, self.degree
        lo = d * y - self._bound
        hi = d * y + self._bound
        flo = base.lift_s(lo) - y
        x = 0.5 * (lo + hi)
        for _ in range(100):
            fx = base.lift_s(x) - y
            if fx == 0.0:
                return x
            if (fx < 0.0) == (flo < 0.0):
                lo, flo = x, fx
            else:
                hi = x
            dfx = base.deriv_s(x)
            if dfx != 0.0:
                xn = x - fx / dfx
                x = xn if lo < xn < hi else 0.5 * (lo + hi)
            else:
                x = 0.5 * (lo + hi)
            if hi - lo < 1e-14:
                break
        return x

    def _solve(self, y):
        y = np.asarray(y, dtype=float)
        lo = self.degree * y - self._bound
        hi = self.degree * y + self._bound
        flo = np.asarray(self.base.lift(lo)) - y
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            fm = np.asarray(self.base.lift(mid)) - y
            same = (fm < 0.0) == (flo < 0.0)
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        return 0.5 * (lo + hi)

    def lift(self, x):
        if np.ndim(x) == 0:
            return self._solve_s(float(x))
        return self._solve(x)

    def lift_s(self, x):
        return self._solve_s(x)

    def _lift0(self, r):
        return self.lift(r)

    def deriv(self, x):
        gx = self.lift(x)
        return 1.0 / self.base.deriv(gx)

    def deriv_s(self, x):
        return 1.0 / self.base.deriv_s(self._solve_s(x))

    def deriv2(self, x):
        gx = self.lift(x)
        d1 = self.base.deriv(gx)
        return -self.base.deriv2(gx) / d1**3

    def deriv2_s(self, x):
        gx = self._solve_s(x)
        d1 = self.base.deriv_s(gx)
        return -self.base.deriv2_s(gx) / d1**3

    def invert(self):
        return self.base

    def to_dict(self):
        return {"kind": "inverse", "of": self.base.to_dict()}

    def __repr__(self):
        return f"InverseMap({self.base!r})"


class SampledMonotoneMap(CircleMap):
    """Monotone map reconstructed from forward samples (PCHIP per piece).

    This is how serialized reduction charts are re-evaluated: each piece
    interpolates strictly monotone (theta, f(theta)) samples whose ends
    are exact fixed points of the piece.
    """

    def __init__(self, knots, thetas, values):
        from scipy.interpolate import PchipInterpolator

        self.knots = np.asarray(knots, dtype=float)
        self.thetas = [np.asarray(t, dtype=float) for t in thetas]
        self.values = [np.asarray(v, dtype=float) for v in values]
        self.breakpoints = tuple(self.knots)
        self._interp = [PchipInterpolator(t, v) for t, v in zip(self.thetas, self.values)]
        self._dinterp = [ip.derivative() for ip in self._interp]
        self._d2interp = [ip.derivative(2) for ip in self._interp]

    def _piece(self, r):
        idx = np.searchsorted(self.knots, r, side="right") - 1
        return np.clip(idx, 0, len(self._interp) - 1)

    def _eval_with(self, tables, r):
        if np.ndim(r) == 0:
            j = int(self._piece(float(r)))
            return float(tables[j](r))
        r = np.asarray(r, dtype=float)
        idx = self._piece(r)
        out = np.empty(r.shape)
        for j in np.unique(idx):
            mask = idx == j
            out[mask] = tables[j](r[mask])
        return out

    def _lift0(self, r):
        return self._eval_with(self._interp, r)

    def _deriv0(self, r):
        return self._eval_with(self._dinterp, r)

    def _deriv20(self, r):
        return self._eval_with(self._d2interp, r)

    def to_dict(self):
        return {
            "kind": "chart",
            "knots": list(self.knots),
            "theta": [list(t) for t in self.thetas],
            "value": [list(v) for v in self.values],
        }

    def __repr__(self):
        return f"SampledMonotoneMap({len(self._interp)} pieces)"


def map_from_dict(d: dict) -> CircleMap:
    kind = d["kind"]
    if kind == "rotation":
        return Rotation(d["alpha"])
    if kind == "reflection":
        return Reflection()
    if kind == "perturbed":
        return SinePerturbation(d["eps"], d.get("k", 1))
    if kind == "affine":
        return PiecewiseAffineMap(d["src"], d["dst"])
    if kind == "compose":
        outer, inner = d["maps"]
        return compose(map_from_dict(outer), map_from_dict(inner))
    if kind == "inverse":
        return map_from_dict(d["of"]).invert()
    if kind == "chart":
        return SampledMonotoneMap(d["knots"], d["theta"], d["value"])
    raise ValueError(f"unknown map kind {kind!r}")
