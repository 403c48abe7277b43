"""Locate and classify zeros of periodic field coefficients.

Zeros are found by two sweeps over a uniform sample grid: sign changes of
f refined by bisection, plus sign changes of f' (tangential zeros touch
zero without crossing, so bisection on f alone misses them) kept when the
function value is small.  Fields whose zero set fills an interval are not
admissible and raise :class:`NotClassC` with the offending ranges
attached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trig import TAU, PeriodicFunction, PiecewiseTrig, TrigPoly, reduce_angle, uniform_grid

TOL_ZERO = 1e-9
TOL_DEG = 1e-7
MERGE_RES = 1e-9
RESOLUTION = 8192


class NotAZero(ValueError):
    """The supplied angle is not a zero of the coefficient."""


class NotClassC(ValueError):
    """The zero set contains an interval; report attached as ``.report``."""

    def __init__(self, message: str, report: "SingularityReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SingularPoint:
    theta: float
    degenerate: bool
    value_residual: float
    deriv_residual: float

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "degenerate": self.degenerate,
            "value_residual": self.value_residual,
            "deriv_residual": self.deriv_residual,
        }


@dataclass(frozen=True)
class SingularityReport:
    points: tuple[SingularPoint, ...]
    class_c: bool
    interval_zero_ranges: tuple[tuple[float, float], ...] = ()

    @property
    def count(self) -> int:
        return len(self.points)

    def thetas(self) -> np.ndarray:
        return np.asarray([p.theta for p in self.points])

    def degenerate_thetas(self) -> np.ndarray:
        return np.asarray([p.theta for p in self.points if p.degenerate])

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "count": self.count,
            "class_c": self.class_c,
            "interval_zero_ranges": [list(r) for r in self.interval_zero_ranges],
        }


def _bisect_root(fn, a: float, b: float, fa: float, fb: float, xtol: float = 1e-12) -> float:
    while b - a > xtol:
        m = 0.5 * (a + b)
        fm = fn(m)
        if fm == 0.0:
            return m
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def _sweep_roots(fn, grid: np.ndarray, vals: np.ndarray, confirm_span: float = 0.0) -> list[float]:
    """Roots of fn on the circle from samples: crossings + exact hits.

    Around an even-order zero the evaluations are pure rounding noise with
    arbitrary signs, and a noise sample next to a macroscopic one looks
    like a crossing; bisection then lands on the edge of the noise band.
    With ``confirm_span`` > 0 a refined crossing is only kept when the
    function genuinely changes sign across [root - span, root + span],
    which holds for every odd-order zero resolved by the grid.
    """
    roots = []
    n = grid.size
    for i in range(n):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
    ext = np.concatenate([grid, [TAU]])
    vext = np.concatenate([vals, [vals[0]]])
    for i in range(n):
        if vext[i] * vext[i + 1] < 0.0:
            root = _bisect_root(fn, float(ext[i]), float(ext[i + 1]), float(vext[i]), float(vext[i + 1]))
            if confirm_span > 0.0 and fn(root - confirm_span) * fn(root + confirm_span) >= 0.0:
                continue
            roots.append(root)
    return roots


def _cluster_cyclic(values: list[float], res: float) -> list[float]:
    """Merge values closer than ``res`` on the circle; returns sorted reps."""
    if not values:
        return []
    vs = np.sort(reduce_angle(np.asarray(values, dtype=float)))
    clusters: list[list[float]] = [[float(vs[0])]]
    for v in vs[1:]:
        if v - clusters[-1][-1] <= res:
            clusters[-1].append(float(v))
        else:
            clusters.append([float(v)])
    # Wrap: the first and last clusters may be the same zero.
    if len(clusters) > 1 and (clusters[0][0] + TAU - clusters[-1][-1]) <= res:
        first = clusters.pop(0)
        clusters[-1].extend(v + TAU for v in first)
    return sorted(float(reduce_angle(np.mean(c))) for c in clusters)


def _exact_zero_ranges(f: PeriodicFunction) -> list[tuple[float, float]]:
    if isinstance(f, TrigPoly):
        return [(0.0, TAU)] if f.is_zero() else []
    if isinstance(f, PiecewiseTrig):
        return f.zero_ranges()
    return []


def _in_ranges(theta: float, ranges, margin: float) -> bool:
    for lo, hi in ranges:
        if lo - margin <= theta <= hi + margin:
            return True
        if lo - margin <= theta + TAU <= hi + margin:
            return True
    return False


def find_singular(
    f: PeriodicFunction,
    resolution: int = RESOLUTION,
    tol_zero: float = TOL_ZERO,
    tol_deg: float = TOL_DEG,
) -> SingularityReport:
    """All zeros of f in [0, 2*pi) with degeneracy flags.

    Raises :class:`NotClassC` when the exact representation confirms an
    identically-zero piece of length at least one grid step.
    """
    ranges = [r for r in _exact_zero_ranges(f) if r[1] - r[0] >= TAU / resolution]
    grid = uniform_grid(resolution)
    vals = np.asarray(f.eval(grid), dtype=float)
    d = f.deriv()
    dvals = np.asarray(d.eval(grid), dtype=float)

    span = TAU / resolution
    roots = _sweep_roots(lambda t: float(f.eval(t)), grid, vals, confirm_span=span)
    for rho in _sweep_roots(lambda t: float(d.eval(t)), grid, dvals, confirm_span=span):
        if abs(float(f.eval(rho))) < tol_zero:
            roots.append(rho)

    margin = TAU / resolution
    if ranges:
        roots = [r for r in roots if not _in_ranges(r, ranges, margin)]

    points = []
    for theta in _cluster_cyclic(roots, MERGE_RES):
        fv = abs(float(f.eval(theta)))
        dv = abs(float(d.eval(theta)))
        points.append(SingularPoint(theta, dv < tol_deg, fv, dv))

    report = SingularityReport(tuple(points), class_c=not ranges, interval_zero_ranges=tuple(ranges))
    if ranges:
        raise NotClassC("zero set fills an interval", report)
    return report


def is_degenerate(
    f: PeriodicFunction, theta0: float, tol_zero: float = TOL_ZERO, tol_deg: float = TOL_DEG
) -> bool:
    """Whether a zero of f is degenerate (derivative vanishes there too)."""
    if abs(float(f.eval(theta0))) > tol_zero:
        raise NotAZero(f"|f({theta0})| exceeds {tol_zero:.1e}")
    return abs(float(f.deriv().eval(theta0))) < tol_deg
