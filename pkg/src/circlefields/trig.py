"""Exact arithmetic for real 2*pi-periodic functions.

Three representations share one interface (``eval``/``deriv``):

* :class:`TrigPoly` -- finite trigonometric polynomial with integer
  harmonics.
* :class:`PiecewiseTrig` -- trig polynomials glued C1 at breakpoints on
  the circle; each breakpoint belongs to the piece on its right.
* :class:`NumericPeriodic` -- callable-backed values produced by
  coordinate changes that leave the trig-polynomial class.

TrigPoly / PiecewiseTrig arithmetic is exact up to float rounding
(products expand through harmonic convolution), which keeps Lie brackets
and residual checks free of sampling and quadrature error.  All values
are immutable after construction.
"""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

TAU = math.tau

# Inputs are exact closed forms, so the C1 gluing check only has to
# absorb rounding noise.
TAU_C1 = 1e-10
# Max sup-residual accepted when refitting numeric data to trig form.
TAU_FIT = 1e-7


class NotRepresentable(ValueError):
    """Numeric data does not fit a trig polynomial within tolerance."""


def reduce_angle(theta):
    """Map an angle (scalar or array) to [0, 2*pi)."""
    return np.mod(theta, TAU)


def uniform_grid(n: int) -> np.ndarray:
    """n equally spaced angles starting at 0, excluding 2*pi."""
    return np.arange(n) * (TAU / n)


class PeriodicFunction:
    """Interface for real 2*pi-periodic functions on the circle."""

    __slots__ = ()

    def eval(self, theta):
        raise NotImplementedError

    def deriv(self) -> "PeriodicFunction":
        raise NotImplementedError

    def __call__(self, theta):
        return self.eval(theta)

    # Arithmetic sugar; exact whenever both operands are exact.
    def __add__(self, other):
        return lincomb(1.0, self, 1.0, as_periodic(other))

    __radd__ = __add__

    def __sub__(self, other):
        return lincomb(1.0, self, -1.0, as_periodic(other))

    def __rsub__(self, other):
        return lincomb(-1.0, self, 1.0, as_periodic(other))

    def __mul__(self, other):
        if isinstance(other, PeriodicFunction):
            return multiply(self, other)
        return lincomb(float(other), self, 0.0, _ZERO)

    __rmul__ = __mul__

    def __neg__(self):
        return lincomb(-1.0, self, 0.0, _ZERO)


class TrigPoly(PeriodicFunction):
    """a0 + sum_m a[m-1]*cos(m*t) + b[m-1]*sin(m*t) with finite degree."""

    __slots__ = ("a0", "a", "b")

    def __init__(self, a0: float = 0.0, cos=(), sin=()):
        a = np.atleast_1d(np.asarray(cos, dtype=float)).ravel()
        b = np.atleast_1d(np.asarray(sin, dtype=float)).ravel()
        m = max(a.size, b.size)
        if a.size < m:
            a = np.concatenate([a, np.zeros(m - a.size)])
        if b.size < m:
            b = np.concatenate([b, np.zeros(m - b.size)])
        # Trim harmonics that are exactly zero so `degree` is meaningful.
        while m > 0 and a[m - 1] == 0.0 and b[m - 1] == 0.0:
            m -= 1
        a = a[:m].copy()
        b = b[:m].copy()
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a0", float(a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPoly is immutable")

    @property
    def degree(self) -> int:
        return self.a.size

    def _eval_scalar(self, t: float) -> float:
        out = self.a0
        for m in range(self.degree):
            mt = (m + 1) * t
            out += self.a[m] * math.cos(mt) + self.b[m] * math.sin(mt)
        return out

    def eval(self, theta):
        if np.ndim(theta) == 0:
            return self._eval_scalar(float(theta))
        th = np.asarray(theta, dtype=float)
        if self.degree == 0:
            return np.full(th.shape, self.a0)
        m = np.arange(1, self.degree + 1)
        ang = th.reshape(-1, 1) * m
        vals = self.a0 + np.cos(ang) @ self.a + np.sin(ang) @ self.b
        return vals.reshape(th.shape)

    def deriv(self) -> "TrigPoly":
        m = np.arange(1, self.degree + 1)
        return TrigPoly(0.0, cos=m * self.b, sin=-m * self.a)

    def shift(self, alpha: float) -> "TrigPoly":
        """The function t -> f(t - alpha) (rotation pushforward)."""
        m = np.arange(1, self.degree + 1)
        c, s = np.cos(m * alpha), np.sin(m * alpha)
        return TrigPoly(
            self.a0,
            cos=self.a * c - self.b * s,
            sin=self.a * s + self.b * c,
        )

    def coeff_bound(self) -> float:
        """|a0| + sum of harmonic coefficient magnitudes (a sup bound)."""
        return abs(self.a0) + float(np.sum(np.abs(self.a)) + np.sum(np.abs(self.b)))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.coeff_bound() <= tol

    def to_dict(self) -> dict:
        return {"a0": self.a0, "cos": list(self.a), "sin": list(self.b)}

    @classmethod
    def from_dict(cls, d: dict) -> "TrigPoly":
        return cls(d.get("a0", 0.0), d.get("cos", ()), d.get("sin", ()))

    def __repr__(self):
        return f"TrigPoly(a0={self.a0!r}, cos={list(self.a)!r}, sin={list(self.b)!r})"


def constant(c: float) -> TrigPoly:
    return TrigPoly(a0=c)


def cos_term(k: int, c: float = 1.0) -> TrigPoly:
    coeffs = np.zeros(k)
    coeffs[k - 1] = c
    return TrigPoly(0.0, cos=coeffs)


def sin_term(k: int, c: float = 1.0) -> TrigPoly:
    coeffs = np.zeros(k)
    coeffs[k - 1] = c
    return TrigPoly(0.0, sin=coeffs)


def one_minus_cos(n: int, scale: float = 1.0) -> TrigPoly:
    """scale * (1 - cos(n*t)), the model coefficient with double zeros."""
    return lincomb(1.0, constant(scale), 1.0, cos_term(n, -scale))


_ZERO = TrigPoly()


def as_periodic(x) -> PeriodicFunction:
    if isinstance(x, PeriodicFunction):
        return x
    if isinstance(x, (int, float)):
        return constant(float(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a periodic function")


def _spectrum(p: TrigPoly) -> np.ndarray:
    """Complex harmonics c[-M..M] packed as index m+M."""
    m = p.degree
    c = np.zeros(2 * m + 1, dtype=complex)
    c[m] = p.a0
    if m:
        pos = 0.5 * (p.a - 1j * p.b)
        c[m + 1 :] = pos
        c[:m] = np.conj(pos[::-1])
    return c


def _from_spectrum(c: np.ndarray) -> TrigPoly:
    m = (c.size - 1) // 2
    a0 = c[m].real
    pos = c[m + 1 :]
    return TrigPoly(a0, cos=2.0 * pos.real, sin=-2.0 * pos.imag)


def _mul_trig(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    return _from_spectrum(np.convolve(_spectrum(f), _spectrum(g)))


def _lincomb_trig(alpha: float, f: TrigPoly, beta: float, g: TrigPoly) -> TrigPoly:
    m = max(f.degree, g.degree)

    def pad(v, n):
        return np.concatenate([v, np.zeros(n - v.size)])

    return TrigPoly(
        alpha * f.a0 + beta * g.a0,
        cos=alpha * pad(f.a, m) + beta * pad(g.a, m),
        sin=alpha * pad(f.b, m) + beta * pad(g.b, m),
    )


class PiecewiseTrig(PeriodicFunction):
    """Cyclic piecewise trig polynomial; piece j covers [b_j, b_{j+1}).

    The constructor checks global C1 gluing (values and derivatives agree
    at every breakpoint within ``tol``) unless ``check_c1=False``; results
    of differentiation are only C0 in general and are built unchecked.
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints, pieces, check_c1: bool = True, tol: float = TAU_C1):
        bp = np.asarray(breakpoints, dtype=float).ravel().copy()
        if bp.size == 0:
            raise ValueError("at least one breakpoint required")
        if np.any(bp < 0.0) or np.any(bp >= TAU):
            raise ValueError("breakpoints must lie in [0, 2*pi)")
        if np.any(np.diff(bp) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        pieces = tuple(pieces)
        if len(pieces) != bp.size:
            raise ValueError("need exactly one piece per breakpoint")
        if not all(isinstance(p, TrigPoly) for p in pieces):
            raise TypeError("pieces must be TrigPoly instances")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", pieces)
        if check_c1:
            vjump, djump = self.c1_defect()
            if max(vjump, djump) > tol:
                raise ValueError(
                    f"pieces do not glue C1: value jump {vjump:.3e}, "
                    f"derivative jump {djump:.3e} exceeds {tol:.1e}"
                )

    def __setattr__(self, name, value):
        raise AttributeError("PiecewiseTrig is immutable")

    def c1_defect(self) -> tuple[float, float]:
        """Largest value / derivative mismatch across all breakpoints."""
        vjump = djump = 0.0
        n = len(self.pieces)
        derivs = [p.deriv() for p in self.pieces]
        for j in range(n):
            t = float(self.breakpoints[j])
            left, right = (j - 1) % n, j
            vjump = max(vjump, abs(self.pieces[left](t) - self.pieces[right](t)))
            djump = max(djump, abs(derivs[left](t) - derivs[right](t)))
        return vjump, djump

    def piece_index(self, theta: float) -> int:
        t = float(reduce_angle(theta))
        j = bisect_right(self.breakpoints, t) - 1
        return j if j >= 0 else len(self.pieces) - 1

    def eval(self, theta):
        if np.ndim(theta) == 0:
            t = float(reduce_angle(theta))
            return self.pieces[self.piece_index(t)]._eval_scalar(t)
        th = reduce_angle(np.asarray(theta, dtype=float))
        idx = np.searchsorted(self.breakpoints, th.ravel(), side="right") - 1
        idx[idx < 0] = len(self.pieces) - 1
        out = np.empty(th.size)
        for j in np.unique(idx):
            mask = idx == j
            out[mask] = self.pieces[j].eval(th.ravel()[mask])
        return out.reshape(th.shape)

    def deriv(self) -> "PiecewiseTrig":
        return PiecewiseTrig(
            self.breakpoints, [p.deriv() for p in self.pieces], check_c1=False
        )

    def shift(self, alpha: float) -> "PiecewiseTrig":
        """The function t -> f(t - alpha); breakpoints rotate with it."""
        new_bp = reduce_angle(self.breakpoints + alpha)
        order = np.argsort(new_bp)
        return PiecewiseTrig(
            new_bp[order],
            [self.pieces[j].shift(alpha) for j in order],
            check_c1=False,
        )

    def interval(self, j: int) -> tuple[float, float]:
        """Piece j's covering interval; the end may exceed 2*pi (wrap)."""
        lo = float(self.breakpoints[j])
        if j + 1 < len(self.pieces):
            return lo, float(self.breakpoints[j + 1])
        return lo, float(self.breakpoints[0]) + TAU

    def zero_ranges(self, tol: float = 1e-12) -> list[tuple[float, float]]:
        """Maximal intervals where the function is identically zero."""
        flags = [p.is_zero(tol) for p in self.pieces]
        if all(flags):
            return [(0.0, TAU)]
        n = len(self.pieces)
        ranges = []
        j = 0
        while j < n:
            if flags[j]:
                start = j
                while j < n and flags[j]:
                    j += 1
                lo = float(self.breakpoints[start])
                hi = self.interval(j - 1)[1]
                ranges.append((lo, hi))
            else:
                j += 1
        # Merge a run that wraps through 2*pi.
        if len(ranges) > 1 and flags[0] and flags[-1]:
            first, last = ranges[0], ranges.pop()
            ranges[0] = (last[0], first[1] + TAU)
        return ranges

    def is_zero(self, tol: float = 1e-12) -> bool:
        return all(p.is_zero(tol) for p in self.pieces)

    def to_dict(self) -> dict:
        out = []
        for j, p in enumerate(self.pieces):
            lo, hi = self.interval(j)
            d = p.to_dict()
            d["from"], d["to"] = lo, reduce_angle(hi) if hi > TAU else hi
            out.append(d)
        return {"pieces": out}

    @classmethod
    def from_dict(cls, d: dict, check_c1: bool = True) -> "PiecewiseTrig":
        entries = sorted(d["pieces"], key=lambda e: e["from"])
        bps = [e["from"] for e in entries]
        polys = [TrigPoly.from_dict(e) for e in entries]
        return cls(bps, polys, check_c1=check_c1)

    def __repr__(self):
        return f"PiecewiseTrig(breakpoints={list(self.breakpoints)!r}, {len(self.pieces)} pieces)"


class NumericPeriodic(PeriodicFunction):
    """Callable-backed periodic function.

    ``fn`` must accept arrays; ``dfn`` (when given) is the exact
    derivative.  Without it, ``deriv`` falls back to a central finite
    difference with step ``fd_step``.
    """

    __slots__ = ("fn", "dfn", "fd_step")

    def __init__(self, fn, dfn=None, fd_step: float = 1e-6):
        object.__setattr__(self, "fn", fn)
        object.__setattr__(self, "dfn", dfn)
        object.__setattr__(self, "fd_step", fd_step)

    def __setattr__(self, name, value):
        raise AttributeError("NumericPeriodic is immutable")

    def eval(self, theta):
        out = self.fn(reduce_angle(theta))
        return float(out) if np.ndim(theta) == 0 else out

    def deriv(self) -> "NumericPeriodic":
        if self.dfn is not None:
            return NumericPeriodic(self.dfn)
        h = self.fd_step
        fn = self.fn
        return NumericPeriodic(lambda t: (fn(np.mod(t + h, TAU)) - fn(np.mod(t - h, TAU))) / (2.0 * h))


class _NumLincomb(PeriodicFunction):
    __slots__ = ("alpha", "f", "beta", "g")

    def __init__(self, alpha, f, beta, g):
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "g", g)

    def __setattr__(self, name, value):
        raise AttributeError("immutable")

    def eval(self, theta):
        return self.alpha * self.f.eval(theta) + self.beta * self.g.eval(theta)

    def deriv(self):
        return _NumLincomb(self.alpha, self.f.deriv(), self.beta, self.g.deriv())


class _NumProduct(PeriodicFunction):
    __slots__ = ("f", "g")

    def __init__(self, f, g):
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    def __setattr__(self, name, value):
        raise AttributeError("immutable")

    def eval(self, theta):
        return self.f.eval(theta) * self.g.eval(theta)

    def deriv(self):
        return _NumLincomb(1.0, _NumProduct(self.f.deriv(), self.g), 1.0, _NumProduct(self.f, self.g.deriv()))


def _is_exact(f: PeriodicFunction) -> bool:
    return isinstance(f, (TrigPoly, PiecewiseTrig))


def _merge_breakpoints(f: PeriodicFunction, g: PeriodicFunction) -> np.ndarray:
    bps = []
    for h in (f, g):
        if isinstance(h, PiecewiseTrig):
            bps.append(h.breakpoints)
    merged = np.unique(np.concatenate(bps))
    # Collapse breakpoints equal up to rounding.
    keep = [merged[0]]
    for x in merged[1:]:
        if x - keep[-1] > 1e-14:
            keep.append(x)
    return np.asarray(keep)


def _piece_on(f: PeriodicFunction, lo: float, hi: float) -> TrigPoly:
    """The trig polynomial representing f on (lo, hi)."""
    if isinstance(f, TrigPoly):
        return f
    mid = reduce_angle(0.5 * (lo + hi))
    return f.pieces[f.piece_index(mid)]


def lincomb(alpha: float, f: PeriodicFunction, beta: float, g: PeriodicFunction) -> PeriodicFunction:
    """alpha*f + beta*g; exact when f and g are exact."""
    if isinstance(f, TrigPoly) and isinstance(g, TrigPoly):
        return _lincomb_trig(alpha, f, beta, g)
    if _is_exact(f) and _is_exact(g):
        bps = _merge_breakpoints(f, g)
        pieces = []
        for j in range(bps.size):
            lo = bps[j]
            hi = bps[j + 1] if j + 1 < bps.size else bps[0] + TAU
            pieces.append(_lincomb_trig(alpha, _piece_on(f, lo, hi), beta, _piece_on(g, lo, hi)))
        return PiecewiseTrig(bps, pieces, check_c1=False)
    return _NumLincomb(alpha, f, beta, g)


def multiply(f: PeriodicFunction, g: PeriodicFunction) -> PeriodicFunction:
    """Pointwise product; exact (product-to-sum) when f and g are exact."""
    if isinstance(f, TrigPoly) and isinstance(g, TrigPoly):
        return _mul_trig(f, g)
    if _is_exact(f) and _is_exact(g):
        bps = _merge_breakpoints(f, g)
        pieces = []
        for j in range(bps.size):
            lo = bps[j]
            hi = bps[j + 1] if j + 1 < bps.size else bps[0] + TAU
            pieces.append(_mul_trig(_piece_on(f, lo, hi), _piece_on(g, lo, hi)))
        return PiecewiseTrig(bps, pieces, check_c1=False)
    return _NumProduct(f, g)


def coeff_distance(f: PeriodicFunction, g: PeriodicFunction) -> float:
    """Max coefficient-wise difference; piecewise inputs are merged first."""
    if isinstance(f, TrigPoly) and isinstance(g, TrigPoly):
        diff = _lincomb_trig(1.0, f, -1.0, g)
        parts = [abs(diff.a0)]
        if diff.degree:
            parts.append(float(np.max(np.abs(diff.a))))
            parts.append(float(np.max(np.abs(diff.b))))
        return max(parts)
    if _is_exact(f) and _is_exact(g):
        diff = lincomb(1.0, f, -1.0, g)
        if isinstance(diff, TrigPoly):
            return coeff_distance(diff, _ZERO)
        return max(coeff_distance(p, _ZERO) for p in diff.pieces)
    raise TypeError("coefficient distance requires exact representations")


def sup_diff(f: PeriodicFunction, g: PeriodicFunction, n: int = 4096) -> float:
    """Sup-norm of f - g sampled on an n-point uniform grid."""
    grid = uniform_grid(n)
    return float(np.max(np.abs(np.asarray(f.eval(grid)) - np.asarray(g.eval(grid)))))


def fit_trigpoly(f, degree: int, samples: int = 4096) -> TrigPoly:
    """Least-squares/FFT fit on a uniform grid; exact for band-limited data."""
    if samples < 2 * degree + 2:
        raise ValueError("not enough samples for the requested degree")
    vals = f.eval(uniform_grid(samples)) if isinstance(f, PeriodicFunction) else np.asarray(f, float)
    spec = np.fft.rfft(vals)
    a0 = spec[0].real / samples
    a = 2.0 * spec[1 : degree + 1].real / samples
    b = -2.0 * spec[1 : degree + 1].imag / samples
    return TrigPoly(a0, cos=a, sin=b)


def refit(
    f: PeriodicFunction,
    degree: int = 48,
    tol: float = TAU_FIT,
    breakpoints=None,
    samples: int = 4096,
) -> PeriodicFunction:
    """Refit a numeric periodic function to exact trig form.

    Without breakpoints a global trig polynomial is fitted by FFT; with
    breakpoints each piece is fitted by least squares.  Raises
    :class:`NotRepresentable` when the sup-residual exceeds ``tol``.
    """
    if breakpoints is None:
        p = fit_trigpoly(f, degree, samples)
        probe = uniform_grid(samples) + 0.5 * TAU / samples
        res = float(np.max(np.abs(np.asarray(f.eval(probe)) - np.asarray(p.eval(probe)))))
        if res > tol:
            raise NotRepresentable(f"global trig fit residual {res:.3e} exceeds {tol:.1e}")
        return p
    bps = np.asarray(breakpoints, float)
    pieces = []
    res = 0.0
    for j in range(bps.size):
        lo = bps[j]
        hi = bps[j + 1] if j + 1 < bps.size else bps[0] + TAU
        ts = np.linspace(lo, hi, 8 * (degree + 1), endpoint=False)[1:]
        m = np.arange(1, degree + 1)
        design = np.hstack([np.ones((ts.size, 1)), np.cos(np.outer(ts, m)), np.sin(np.outer(ts, m))])
        y = np.asarray(f.eval(ts))
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        piece = TrigPoly(coef[0], cos=coef[1 : degree + 1], sin=coef[degree + 1 :])
        probe = np.linspace(lo, hi, 257)[1:-1]
        res = max(res, float(np.max(np.abs(np.asarray(f.eval(probe)) - np.asarray(piece.eval(probe))))))
        pieces.append(piece)
    if res > tol:
        raise NotRepresentable(f"piecewise trig fit residual {res:.3e} exceeds {tol:.1e}")
    return PiecewiseTrig(bps, pieces, check_c1=False)


def to_json_dict(f: PeriodicFunction) -> dict:
    if isinstance(f, (TrigPoly, PiecewiseTrig)):
        return f.to_dict()
    raise TypeError("only exact trig representations serialize to JSON; refit first")


def from_json_dict(d: dict) -> PeriodicFunction:
    if "pieces" in d:
        return PiecewiseTrig.from_dict(d)
    return TrigPoly.from_dict(d)
