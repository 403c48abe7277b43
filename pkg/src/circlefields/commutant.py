"""All fields commuting with a given field V.

Between consecutive degenerate zeros of v the commuting coefficient must
be a constant multiple of v, so the full commutant is parametrized by one
constant per maximal interval; the pieces glue C1 automatically because
both v and v' vanish at the degenerate points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import VectorField
from .singular import find_singular
from .trig import TAU, PiecewiseTrig, constant, multiply


class DimensionMismatch(ValueError):
    """One constant per maximal interval is required."""


class TriviallyDependent(ValueError):
    """Fewer than two degenerate points force W = lambda * V globally."""


@dataclass(frozen=True)
class DegenerateDecomposition:
    """Degenerate zeros of v and the maximal intervals between them."""

    degenerate_points: tuple[float, ...]
    intervals: tuple[tuple[float, float], ...]

    @property
    def n_intervals(self) -> int:
        return len(self.intervals)


def decompose(V: VectorField) -> DegenerateDecomposition:
    """Split the circle at the degenerate zeros of V's coefficient.

    Requires V to be admissible (zeros do not fill intervals); raises
    :class:`~circlefields.singular.NotClassC` otherwise.
    """
    report = find_singular(V.coeff)
    pts = tuple(float(t) for t in report.degenerate_thetas())
    if len(pts) == 0:
        return DegenerateDecomposition((), ((0.0, TAU),))
    if len(pts) == 1:
        return DegenerateDecomposition(pts, ((pts[0], pts[0] + TAU),))
    intervals = []
    for j, lo in enumerate(pts):
        hi = pts[j + 1] if j + 1 < len(pts) else pts[0] + TAU
        intervals.append((lo, hi))
    return DegenerateDecomposition(pts, tuple(intervals))


def linearly_independent(lambdas) -> bool:
    """Whether the commutant constants give a field independent of V."""
    lam = np.asarray(lambdas, dtype=float)
    return lam.size > 1 and float(np.max(lam) - np.min(lam)) > 0.0


def build_commuting(V: VectorField, lambdas) -> VectorField:
    """W with w = lambda_j * v on each maximal interval; [V, W] = 0.

    Raises :class:`TriviallyDependent` when the decomposition has at most
    one degenerate point (then every commuting field is a global multiple
    of V).  With two or more intervals and all constants equal the result
    is still returned; use :func:`linearly_independent` to detect it.
    """
    dec = decompose(V)
    if len(dec.degenerate_points) <= 1:
        raise TriviallyDependent(
            "fewer than two degenerate points: every commuting field is a multiple of V"
        )
    lam = [float(x) for x in lambdas]
    if len(lam) != dec.n_intervals:
        raise DimensionMismatch(
            f"need {dec.n_intervals} constants (one per interval), got {len(lam)}"
        )
    # A step function of the constants, multiplied exactly against v; the
    # product merges breakpoints, so piecewise v works too.
    step = PiecewiseTrig(
        np.asarray(dec.degenerate_points),
        [constant(c) for c in lam],
        check_c1=False,
    )
    w = multiply(step, V.coeff)
    # Gluing is C1 because v = v' = 0 at every degenerate point; rebuild
    # with the check on as a self-test of that invariant.
    w = PiecewiseTrig(w.breakpoints, w.pieces, check_c1=True)
    return VectorField(w)
