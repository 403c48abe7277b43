"""Scalar adaptive Simpson quadrature.

Used for the nonvanishing-coefficient integrals and for the endpoint
integrals of the reduction charts, whose integrands blow up like a double
pole toward interval ends.  Two practical safeguards matter there:

* coefficients evaluated near their double zeros carry large *relative*
  rounding noise, so below a certain scale the Richardson error estimate
  stops shrinking; the recursion detects that plateau (the estimate is
  then at its attainable floor) instead of subdividing to the depth cap;
* segment tolerances are best chosen relative to the segment's own
  magnitude (see :func:`integrate_relative`), since divergent tails are
  only ever needed to relative accuracy.
"""

from __future__ import annotations

import math


def adaptive_simpson(fn, a: float, b: float, tol: float = 1e-10, max_depth: int = 48) -> float:
    """Integral of ``fn`` over [a, b] to absolute tolerance ``tol``.

    ``fn`` must be finite at every evaluation point.  Returns the current
    Richardson estimate when the error plateaus at the rounding-noise
    floor or the depth cap is hit.
    """
    if a == b:
        return 0.0
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _rec(fn, a, b, fa, fm, fb, whole, tol, max_depth, math.inf, 0, 0)


def _rec(fn, a, b, fa, fm, fb, whole, tol, depth, prev_delta, stall_run, level):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = fn(lm), fn(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    adelta = abs(delta)
    # Plateau guard: asymptotically Simpson shrinks the estimate ~16x per
    # level, so a run of non-improving levels deep in the tree says the
    # integrand's rounding noise dominates; the estimate is at its
    # attainable floor and further subdivision only burns time.
    run = stall_run + 1 if adelta >= 0.25 * prev_delta else 0
    if (
        depth <= 0
        or adelta <= 15.0 * tol
        or (level >= 10 and run >= 3)
        # Subdivision no longer produces new points at float resolution.
        or abs(b - a) <= 4e-16 * (abs(a) + abs(b))
    ):
        return left + right + delta / 15.0
    half = 0.5 * tol
    return _rec(fn, a, m, fa, flm, fm, left, half, depth - 1, adelta, run, level + 1) + _rec(
        fn, m, b, fm, frm, fb, right, half, depth - 1, adelta, run, level + 1
    )


def integrate_relative(
    fn, a: float, b: float, rel: float = 1e-11, floor: float = 1e-13, max_depth: int = 48
) -> float:
    """Integrate to a tolerance relative to the segment's own magnitude."""
    if a == b:
        return 0.0
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    tol = max(floor, rel * abs(whole))
    return _rec(fn, a, b, fa, fm, fb, whole, tol, max_depth, math.inf, 0, 0)


def cumulative_integral(fn, nodes, tol: float = 1e-12) -> list[float]:
    """Antiderivative values at ``nodes`` with F(nodes[0]) = 0."""
    out = [0.0]
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        out.append(out[-1] + adaptive_simpson(fn, lo, hi, tol=tol))
    return out
