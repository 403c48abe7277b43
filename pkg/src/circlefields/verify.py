"""Executable diagnostics for noncommutative-pair structure.

Every structural fact about a pair with [V, W] = W becomes a named check
with a numeric residual: the bracket identity itself, existence and
finiteness of zeros of W, inclusion of those zeros among the zeros of V,
their degeneracy for W, admissibility of both coefficients, and the
invariance of the zero count under equivalence transformations.
Failures are report entries, never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import VectorField, bracket_residual, pushforward
from .maps import CircleMap
from .singular import NotClassC, SingularityReport, find_singular
from .trig import TAU

# Residuals are sup-norms over a 4096-point grid; the degeneracy and
# matching thresholds line up with the zero-detection module.
GRID_N = 4096
TOL_BRACKET = 1e-8
TOL_MATCH = 1e-8
TOL_DEG = 1e-7
COUNT_BOUND = 4096


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": float(self.residual),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks], "overall": self.overall}


def _cyclic_distance(a: float, b: float) -> float:
    d = abs(a - b) % TAU
    return min(d, TAU - d)


def _safe_report(coeff) -> tuple[SingularityReport | None, bool]:
    """(report, admissible); NotClassC yields its attached partial report."""
    try:
        return find_singular(coeff), True
    except NotClassC as exc:
        return exc.report, False


def validate_noncommutative(
    V: VectorField,
    W: VectorField,
    tol_bracket: float = TOL_BRACKET,
    tol_match: float = TOL_MATCH,
    tol_deg: float = TOL_DEG,
) -> VerificationReport:
    """Run the full structural check list for a candidate pair."""
    checks: list[CheckResult] = []

    rb = bracket_residual(V, W, GRID_N)
    checks.append(
        CheckResult("bracket", rb <= tol_bracket, rb, "sup |coeff([V,W]) - coeff(W)|")
    )

    w_report, w_ok = _safe_report(W.coeff)
    v_report, v_ok = _safe_report(V.coeff)

    count = w_report.count
    checks.append(
        CheckResult("lemma1", count >= 1, float(count), "W must have a singular point")
    )
    checks.append(
        CheckResult(
            "lemma3",
            0 < count <= COUNT_BOUND,
            float(count),
            f"zero count within the finite-detection bound {COUNT_BOUND}",
        )
    )

    if count and v_report.count:
        v_zeros = v_report.thetas()
        worst = max(
            min(_cyclic_distance(wz, vz) for vz in v_zeros) for wz in w_report.thetas()
        )
    elif count:
        worst = TAU  # nothing to match against
    else:
        worst = 0.0
    checks.append(
        CheckResult(
            "lemma2",
            worst <= tol_match,
            float(worst),
            "zeros of W within matching distance of zeros of V",
        )
    )

    worst_deriv = max((p.deriv_residual for p in w_report.points), default=0.0)
    checks.append(
        CheckResult(
            "lemma4",
            worst_deriv < tol_deg,
            float(worst_deriv),
            "every zero of W degenerate for W",
        )
    )

    checks.append(
        CheckResult(
            "classC",
            w_ok and v_ok,
            0.0 if (w_ok and v_ok) else 1.0,
            "no interval of zeros in either coefficient",
        )
    )
    return VerificationReport(tuple(checks))


def invariance_suite(W: VectorField, maps: list[CircleMap]) -> VerificationReport:
    """Zero count of W compared against each transported copy."""
    base = find_singular(W.coeff)
    counts = []
    for fmap in maps:
        counts.append(find_singular(pushforward(W, fmap).coeff).count)
    ok = all(c == base.count for c in counts)
    worst = max((abs(c - base.count) for c in counts), default=0)
    detail = f"base count {base.count}; transported counts {counts}"
    return VerificationReport(
        (CheckResult("countInvariance", ok, float(worst), detail),)
    )
