"""Reduction of a noncommutative pair to its canonical form.

Pipeline: move the zeros of W onto the uniform grid 2*pi*k/n with a
rotation followed by a monotone piecewise-affine map, then straighten the
coefficient on each grid interval with a chart built from the endpoint
integral

    I(theta) = int_{midpoint}^{theta} ds / w(s),

which diverges toward both interval ends because the zeros are double.
The monotone solution of  w * f' = sigma * (1 - cos(n f))  anchored at
the interval midpoint is

    f(theta) = midpoint + (2/n) * arctan(sigma * n * I(theta)),

with sigma the sign of w on the interval; it fixes the midpoint, sends
the interval onto itself, and is certified in the test suite against
direct high-order integration of the defining Cauchy problem.  Once
|n*I| exceeds ``SATURATION`` the arctan is flat to working precision and
the chart is clamped to the endpoint value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import VectorField, bracket_residual, pushforward
from .maps import CircleMap, PiecewiseAffineMap, Rotation, compose
from .quadrature import adaptive_simpson
from .singular import SingularityReport, find_singular
from .trig import TAU, PeriodicFunction, PiecewiseTrig, TrigPoly, reduce_angle

SATURATION = 1e6  # |n*I| beyond which the chart is endpoint-clamped
_DYADIC_LEVELS = 27  # node ladder reaches ~1e-8 of the interval length


class OutsideInterval(ValueError):
    """Angle not strictly inside the requested grid interval."""


class SignChange(ValueError):
    """Coefficient changes sign inside a grid interval."""


class NoSingularPoints(ValueError):
    """W has no zero, so the pair cannot realize the algebra."""


class NotARealization(ValueError):
    """[V, W] = W fails beyond tolerance."""


@dataclass(frozen=True)
class SingularGrid:
    """Uniform singularity grid theta_k = 2*pi*k/n with open intervals."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid needs n >= 1")

    @property
    def spacing(self) -> float:
        return TAU / self.n

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def point(self, k: int) -> float:
        return k * self.spacing

    def midpoint(self, k: int) -> float:
        return (k + 0.5) * self.spacing

    def interval(self, k: int) -> tuple[float, float]:
        return k * self.spacing, (k + 1) * self.spacing

    def piece_of(self, theta: float) -> int:
        k = int(reduce_angle(theta) // self.spacing)
        return min(k, self.n - 1)


def endpoint_integral(
    w: PeriodicFunction, grid: SingularGrid, k: int, theta: float, tol: float = 1e-11
) -> float:
    """I(theta) from the midpoint of interval k; strictly monotone in theta.

    Requires w nonvanishing with constant sign on the open interval; the
    integral diverges toward both interval ends.
    """
    lo, hi = grid.interval(k)
    if not lo < theta < hi:
        raise OutsideInterval(f"theta={theta} is not inside ({lo}, {hi})")
    mid = grid.midpoint(k)
    return adaptive_simpson(lambda t: 1.0 / w.eval(t), mid, theta, tol=tol)


class IntervalChart:
    """Monotone chart of one grid interval straightening w on it.

    Stores cumulative endpoint-integral values on a dyadic node ladder so
    evaluation and inversion only ever integrate across a short span.
    """

    def __init__(self, w: PeriodicFunction, grid: SingularGrid, k: int):
        self.w = w
        self.grid = grid
        self.k = k
        self.lo, self.hi = grid.interval(k)
        self.mid = grid.midpoint(k)
        h = grid.spacing

        probes = self.lo + h * np.linspace(0.002, 0.998, 199)
        vals = np.asarray(w.eval(probes), dtype=float)
        if float(np.min(np.abs(vals))) == 0.0 or float(np.min(vals) * np.max(vals)) < 0.0:
            raise SignChange(f"coefficient changes sign or vanishes inside interval {k}")
        self.sigma = 1 if vals[0] > 0 else -1
        self._w_deriv = w.deriv()

        # Dyadic ladders toward both (divergent) endpoints plus a uniform
        # central band, so that any evaluation only integrates a short hop
        # from the nearest precomputed node.
        offsets = 0.5 * h * (0.5 ** np.arange(_DYADIC_LEVELS))
        central = self.lo + h * np.linspace(0.25, 0.75, 33)
        nodes = np.concatenate([self.lo + offsets[::-1], central, self.hi - offsets])
        nodes = np.unique(nodes)
        self.nodes = nodes
        self._mid_idx = int(np.searchsorted(nodes, self.mid))

        inv_w = self._inv_w
        acc = np.zeros(nodes.size)
        for j in range(self._mid_idx, nodes.size - 1):
            acc[j + 1] = acc[j] + adaptive_simpson(inv_w, nodes[j], nodes[j + 1], tol=self._tol(acc[j]))
        for j in range(self._mid_idx, 0, -1):
            acc[j - 1] = acc[j] - adaptive_simpson(inv_w, nodes[j - 1], nodes[j], tol=self._tol(acc[j]))
        self.I_nodes = acc

    def _inv_w(self, t: float) -> float:
        return 1.0 / self.w.eval(t)

    def _tol(self, i_scale: float) -> float:
        # The chart sees the integral through arctan(n*I): an absolute
        # integral error e contributes about 2*e/(1 + (n*I)^2) to the
        # chart, so accuracy requirements relax quadratically toward the
        # divergent ends and tolerances may follow suit.
        x = self.grid.n * i_scale
        return max(1e-13, 1e-12 * (1.0 + x * x))

    # -- endpoint integral ------------------------------------------------
    def integral(self, theta: float) -> float:
        """I(theta) via the nearest precomputed node plus a short hop."""
        if not self.lo < theta < self.hi:
            raise OutsideInterval(f"theta={theta} outside ({self.lo}, {self.hi})")
        if theta <= self.nodes[0]:
            return float(self.I_nodes[0])
        if theta >= self.nodes[-1]:
            return float(self.I_nodes[-1])
        j = int(np.searchsorted(self.nodes, theta))
        base = j - 1 if theta - self.nodes[j - 1] <= self.nodes[j] - theta else j
        base_i = float(self.I_nodes[base])
        hop = adaptive_simpson(self._inv_w, float(self.nodes[base]), theta, tol=self._tol(base_i))
        return base_i + hop

    # -- chart values ------------------------------------------------------
    def value(self, theta: float) -> float:
        if theta <= self.nodes[0]:
            return self.lo
        if theta >= self.nodes[-1]:
            return self.hi
        n = self.grid.n
        x = self.sigma * n * self.integral(theta)
        if x <= -SATURATION:
            return self.lo
        if x >= SATURATION:
            return self.hi
        return self.mid + (2.0 / n) * math.atan(x)

    __call__ = value

    def deriv(self, theta: float) -> float:
        n = self.grid.n
        if not self.lo < theta < self.hi:
            return 0.0
        x = n * self.integral(theta)
        return 2.0 * self.sigma / (self.w.eval(theta) * (1.0 + x * x))

    def deriv2(self, theta: float) -> float:
        n = self.grid.n
        if not self.lo < theta < self.hi:
            return 0.0
        i_val = self.integral(theta)
        x2 = (n * i_val) ** 2
        wv = self.w.eval(theta)
        wd = float(self._w_deriv.eval(theta))
        num = wd * (1.0 + x2) + 2.0 * n * n * i_val
        return -2.0 * self.sigma * num / (wv * wv * (1.0 + x2) ** 2)

    # -- inversion ----------------------------------------------------------
    def inverse(self, target: float) -> float:
        """theta with value(theta) = target, for target inside the interval."""
        n = self.grid.n
        half = math.tan(0.5 * n * (target - self.mid))
        i_target = self.sigma * half / n
        signed = self.sigma * self.I_nodes
        ordered = signed  # increasing in theta by construction
        st = self.sigma * i_target
        if st <= ordered[0]:
            return float(self.nodes[0])
        if st >= ordered[-1]:
            return float(self.nodes[-1])
        j = int(np.searchsorted(ordered, st))
        lo_t, hi_t = float(self.nodes[j - 1]), float(self.nodes[j])
        base_theta = lo_t
        base_i = float(self.I_nodes[j - 1])
        theta = 0.5 * (lo_t + hi_t)
        tol = self._tol(base_i)
        for _ in range(60):
            hop = adaptive_simpson(self._inv_w, base_theta, theta, tol=tol)
            g = base_i + hop - i_target
            if self.sigma * g > 0.0:
                hi_t = theta
            else:
                lo_t = theta
            wv = self.w.eval(theta)
            step = g * wv  # Newton step for I(theta) = target (I' = 1/w)
            # The achievable accuracy is set by the hop quadrature noise.
            if abs(step) < 1e-12 or hi_t - lo_t < 1e-12:
                break
            cand = theta - step
            theta = cand if lo_t < cand < hi_t else 0.5 * (lo_t + hi_t)
        return theta


class ChartMap(CircleMap):
    """All interval charts assembled into one circle map (grid points fixed)."""

    def __init__(self, grid: SingularGrid, charts: list[IntervalChart]):
        if len(charts) != grid.n:
            raise ValueError("need one chart per grid interval")
        self.grid = grid
        self.charts = charts
        self.breakpoints = tuple(grid.points)

    def _value_s(self, r: float) -> float:
        k = self.grid.piece_of(r)
        lo, hi = self.grid.interval(k)
        if r <= lo:
            return lo
        return self.charts[k].value(r)

    def _lift0(self, r):
        if np.ndim(r) == 0:
            return self._value_s(float(r))
        rr = np.asarray(r, dtype=float)
        return np.asarray([self._value_s(float(x)) for x in rr.ravel()]).reshape(rr.shape)

    def _lift0_s(self, r):
        return self._value_s(r)

    def _deriv_s(self, r: float) -> float:
        return self.charts[self.grid.piece_of(r)].deriv(r)

    def _deriv0(self, r):
        if np.ndim(r) == 0:
            return self._deriv_s(float(r))
        rr = np.asarray(r, dtype=float)
        return np.asarray([self._deriv_s(float(x)) for x in rr.ravel()]).reshape(rr.shape)

    def _deriv20(self, r):
        if np.ndim(r) == 0:
            return self.charts[self.grid.piece_of(float(r))].deriv2(float(r))
        rr = np.asarray(r, dtype=float)
        return np.asarray(
            [self.charts[self.grid.piece_of(float(x))].deriv2(float(x)) for x in rr.ravel()]
        ).reshape(rr.shape)

    def invert(self):
        return _ChartMapInverse(self)

    def to_dict(self):
        # Chebyshev-clustered forward samples per interval are enough to
        # re-evaluate the map via monotone interpolation.
        thetas, values = [], []
        m = 64
        for k in range(self.grid.n):
            lo, hi = self.grid.interval(k)
            ts = lo + (hi - lo) * 0.5 * (1.0 - np.cos(np.pi * np.arange(m + 1) / m))
            vs = [lo] + [self.charts[k].value(float(t)) for t in ts[1:-1]] + [hi]
            thetas.append(list(ts))
            values.append(vs)
        return {
            "kind": "chart",
            "knots": list(self.grid.points),
            "theta": thetas,
            "value": values,
        }


class _ChartMapInverse(CircleMap):
    def __init__(self, fwd: ChartMap):
        self.fwd = fwd
        self.breakpoints = fwd.breakpoints

    def _inv_s(self, r: float) -> float:
        k = self.fwd.grid.piece_of(r)
        lo, hi = self.fwd.grid.interval(k)
        if r <= lo:
            return lo
        return self.fwd.charts[k].inverse(r)

    def _lift0(self, r):
        if np.ndim(r) == 0:
            return self._inv_s(float(r))
        rr = np.asarray(r, dtype=float)
        return np.asarray([self._inv_s(float(x)) for x in rr.ravel()]).reshape(rr.shape)

    def _lift0_s(self, r):
        return self._inv_s(r)

    def _deriv0(self, r):
        x = self._lift0(r)
        return 1.0 / self.fwd._deriv0(x)

    def _deriv0_s(self, r):
        return 1.0 / self.fwd._deriv_s(self._inv_s(r))

    def _deriv20(self, r):
        x = self._lift0(r)
        d1 = self.fwd._deriv0(x)
        return -self.fwd._deriv20(x) / d1**3

    def invert(self):
        return self.fwd

    def to_dict(self):
        return {"kind": "inverse", "of": self.fwd.to_dict()}


@dataclass(frozen=True)
class CanonicalPair:
    """(n, lambda_k, sigma_k) plus the rotation used while normalizing.

    The pair realizes coefficient v = (1/n) sin(n t) + lambda_k (1 - cos(n t))
    and w = sigma_k (1 - cos(n t)) on each grid interval.
    """

    n: int
    lambdas: tuple[float, ...]
    sigmas: tuple[int, ...]
    rotation: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.lambdas) != self.n or len(self.sigmas) != self.n:
            raise ValueError("need one lambda and one sigma per interval")
        if any(s not in (-1, 1) for s in self.sigmas):
            raise ValueError("sigma entries must be +1 or -1")

    @property
    def grid(self) -> SingularGrid:
        return SingularGrid(self.n)

    def v_coeff(self) -> PiecewiseTrig:
        n = self.n
        pieces = []
        for lam in self.lambdas:
            coeffs_cos = np.zeros(n)
            coeffs_sin = np.zeros(n)
            coeffs_cos[n - 1] = -lam
            coeffs_sin[n - 1] = 1.0 / n
            pieces.append(TrigPoly(lam, cos=coeffs_cos, sin=coeffs_sin))
        return PiecewiseTrig(self.grid.points, pieces)

    def w_coeff(self) -> PiecewiseTrig:
        n = self.n
        pieces = []
        for s in self.sigmas:
            coeffs_cos = np.zeros(n)
            coeffs_cos[n - 1] = -float(s)
            pieces.append(TrigPoly(float(s), cos=coeffs_cos))
        return PiecewiseTrig(self.grid.points, pieces)

    def fields(self) -> tuple[VectorField, VectorField]:
        return VectorField(self.v_coeff()), VectorField(self.w_coeff())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": list(self.lambdas),
            "sigma": list(self.sigmas),
            "rotation": self.rotation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CanonicalPair":
        return cls(
            int(d["n"]),
            tuple(float(x) for x in d["lambda"]),
            tuple(int(x) for x in d["sigma"]),
            float(d.get("rotation", 0.0)),
        )


def cyclic_match(
    a: CanonicalPair, b: CanonicalPair, tol_lambda: float = 1e-6
) -> int | None:
    """Shift s with b matching a rotated by s indices, or None."""
    if a.n != b.n:
        return None
    n = a.n
    for s in range(n):
        if all(a.sigmas[(k + s) % n] == b.sigmas[k] for k in range(n)) and all(
            abs(a.lambdas[(k + s) % n] - b.lambdas[k]) <= tol_lambda for k in range(n)
        ):
            return s
    return None


def normalize_singularities(
    W: VectorField, report: SingularityReport | None = None
) -> tuple[CircleMap, VectorField]:
    """Move the zeros of W onto the uniform grid.

    Returns the normalizing map (piecewise-affine composed with a
    rotation) together with the pushforward of W through it.
    """
    if report is None:
        report = find_singular(W.coeff)
    if report.count == 0:
        raise NoSingularPoints("the coefficient never vanishes")
    zeros = np.sort(report.thetas())
    n = zeros.size
    alpha = float(reduce_angle(-zeros[0]))
    rot = Rotation(alpha)
    src = np.sort(reduce_angle(zeros - zeros[0]))
    src[0] = 0.0
    dst = SingularGrid(n).points
    fmap = compose(PiecewiseAffineMap(src, dst), rot) if n > 1 else rot
    return fmap, pushforward(W, fmap)


def interval_chart(w: PeriodicFunction, grid: SingularGrid, k: int) -> IntervalChart:
    """The straightening chart of grid interval k for coefficient w."""
    return IntervalChart(w, grid, k)


@dataclass(frozen=True)
class ReductionResult:
    pair: CanonicalPair
    fmap: CircleMap
    w_residual: float
    v_residual: float
    report: SingularityReport

    def __iter__(self):
        return iter((self.pair, self.fmap))


def reduce(
    V: VectorField,
    W: VectorField,
    tol_bracket: float = 1e-8,
    probes_per_interval: int = 50,
    margin: float = 0.01,
) -> ReductionResult:
    """Reduce a pair with [V, W] = W to canonical form.

    Returns the canonical data, the reducing map F, and sup-residuals of
    the transported coefficients against the canonical ones, measured at
    probe points at least ``margin`` away from the grid points.
    """
    rb = bracket_residual(V, W)
    if rb > tol_bracket:
        raise NotARealization(f"bracket residual {rb:.3e} exceeds {tol_bracket:.1e}")
    report = find_singular(W.coeff)
    if report.count == 0:
        raise NoSingularPoints("the coefficient of W never vanishes")
    n = report.count
    grid = SingularGrid(n)

    norm_map, W1 = normalize_singularities(W, report)
    alpha = float(reduce_angle(-np.sort(report.thetas())[0]))

    charts = [IntervalChart(W1.coeff, grid, k) for k in range(n)]
    chart_map = ChartMap(grid, charts)
    fmap = compose(chart_map, norm_map)

    W_t = pushforward(W, fmap)
    V_t = pushforward(V, fmap)

    sigmas = tuple(c.sigma for c in charts)
    lambdas = tuple(float(V_t.coeff.eval(grid.midpoint(k))) / 2.0 for k in range(n))
    pair = CanonicalPair(n, lambdas, sigmas, rotation=alpha)

    v_ref = pair.v_coeff()
    w_ref = pair.w_coeff()
    w_res = v_res = 0.0
    m_eff = min(margin, 0.2 * grid.spacing)
    for k in range(n):
        lo, hi = grid.interval(k)
        ts = np.linspace(lo + m_eff, hi - m_eff, probes_per_interval)
        w_vals = np.asarray(W_t.coeff.eval(ts))
        v_vals = np.asarray(V_t.coeff.eval(ts))
        w_res = max(w_res, float(np.max(np.abs(w_vals - np.asarray(w_ref.eval(ts))))))
        v_res = max(v_res, float(np.max(np.abs(v_vals - np.asarray(v_ref.eval(ts))))))
    return ReductionResult(pair, fmap, w_res, v_res, report)
