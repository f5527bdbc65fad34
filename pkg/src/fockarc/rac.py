"""Asymptotic-commutativity classification of Jacobi sequences.

The two probe quantities are the neighboring weight ratio
r(n) = omega(n) / omega(n-1) and the normalized diagonal increment
d(n) = (alpha(n) - alpha(n-1)) / sqrt(omega(n) + omega(n-1)).  The engine
samples them on a geometric schedule, extrapolates n -> infinity by
polynomial extrapolation in 1/n, and classifies:

    RAC1     r -> 1 and d -> 0,
    RAC2(c)  r -> 1 and d -> c != 0,
    NEITHER  a probe demonstrably converges to the wrong value or diverges,
    UNDETERMINED otherwise.

Classification is numeric-asymptotic, not symbolic; residuals of the
extrapolation are reported, never asserted as proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import arcsine, fock
from .jacobi import JacobiSequence
from .seqexpr import ExprEvalError

DEFAULT_SCHEDULE = (100, 1_000, 10_000, 100_000)
DEFAULT_TOL = 1e-6

# Extrapolation corrections below the double-precision resolution of the
# interpolated values cannot be certified; residuals are floored there.
_RESIDUAL_FLOOR = 2.0**-48


class NoPredictedLimitError(ValueError):
    """Raised when a limit table is requested for a sequence whose
    classification predicts no limit law."""


@dataclass(frozen=True)
class ProbePoint:
    n: int
    r: float
    d: float


@dataclass(frozen=True)
class RacReport:
    classification: str  # RAC1 | RAC2 | NEITHER | UNDETERMINED
    c: Optional[float]
    probes: tuple
    r_limit: float
    r_residual: float
    d_limit: float
    d_residual: float
    r_residual_history: tuple
    d_residual_history: tuple
    predicted_limit: str  # arcsine | discrete_arcsine | unknown
    tol: float
    schedule: tuple

    def summary(self) -> str:
        if self.classification == "RAC2":
            return f"RAC2(c={self.c:.12g})"
        return self.classification


def probe(seq: JacobiSequence, n: int) -> tuple:
    """(r(n), d(n)) in doubles, falling back to exact-ratio evaluation when
    the float path overflows (fast-growing weights)."""
    if n < 1:
        raise ValueError("probe index must be >= 1")
    try:
        w_hi, w_lo = seq.omega_float(n), seq.omega_float(n - 1)
        a_hi, a_lo = seq.alpha_float(n), seq.alpha_float(n - 1)
        r = w_hi / w_lo
        var = w_hi + w_lo
        d = (a_hi - a_lo) / math.sqrt(var) if var not in (0.0, math.inf) else math.nan
        if math.isfinite(r) and math.isfinite(d):
            return r, d
    except (OverflowError, ZeroDivisionError, ExprEvalError):
        pass
    return _probe_exact(seq, n)


def _probe_exact(seq: JacobiSequence, n: int) -> tuple:
    w_hi, w_lo = seq.omega_fraction(n), seq.omega_fraction(n - 1)
    diff = seq.alpha_fraction(n) - seq.alpha_fraction(n - 1)
    r = float(w_hi / w_lo)
    if diff == 0:
        return r, 0.0
    ratio = diff * diff / (w_hi + w_lo)
    sign = 1.0 if diff > 0 else -1.0
    try:
        d = sign * math.sqrt(float(ratio))
    except OverflowError:
        d = sign * math.inf
    return r, d


def _extrapolate(ns: Sequence[int], ys: Sequence[float]) -> tuple:
    """Neville extrapolation of y(n) to n = infinity in the variable 1/n.

    Returns (limit, residual, history) where history[j] is the correction
    after adding point j+1 (floored at float resolution) and residual is
    the final correction.
    """
    hs = [1.0 / n for n in ns]
    tableau = list(ys)
    diagonal = [tableau[0]]
    for j in range(1, len(ns)):
        for i in range(len(ns) - j):
            tableau[i] = (hs[i] * tableau[i + 1] - hs[i + j] * tableau[i]) / (
                hs[i] - hs[i + j]
            )
        diagonal.append(tableau[0])
    history = []
    for prev, cur in zip(diagonal, diagonal[1:]):
        floor = _RESIDUAL_FLOOR * (1.0 + abs(cur))
        history.append(max(abs(cur - prev), floor))
    limit = diagonal[-1]
    residual = history[-1] if history else math.inf
    return limit, residual, tuple(history)


def _demonstrably_divergent(values: Sequence[float], tol: float) -> bool:
    # Successive scale growth beyond tolerance at every refinement level.
    if any(not math.isfinite(v) for v in values):
        return True
    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    if len(diffs) < 2:
        return False
    growing = all(d2 >= d1 for d1, d2 in zip(diffs, diffs[1:]))
    return growing and diffs[-1] > tol and diffs[-1] > diffs[0]


def classify(
    seq: JacobiSequence,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    tol: float = DEFAULT_TOL,
) -> RacReport:
    """Classify a sequence at the given probe schedule.

    The schedule must be strictly increasing with at least 4 points; tol
    bounds both the accepted extrapolation residual and the distance of the
    weight-ratio limit from 1.  A c-estimate within tol of 0 collapses RAC2
    to the stronger RAC1 verdict.
    """
    schedule = tuple(schedule)
    if len(schedule) < 4 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing with >= 4 points")
    if tol <= 0:
        raise ValueError("tol must be positive")
    points = [ProbePoint(n, *probe(seq, n)) for n in schedule]
    r_values = [p.r for p in points]
    d_values = [p.d for p in points]

    r_limit, r_residual, r_history = _extrapolate(schedule, r_values)
    d_limit, d_residual, d_history = _extrapolate(schedule, d_values)

    r_converged = r_residual <= tol and math.isfinite(r_limit)
    d_converged = d_residual <= tol and math.isfinite(d_limit)
    r_wrong = r_converged and abs(r_limit - 1.0) > tol
    r_diverges = _demonstrably_divergent(r_values, tol)
    d_diverges = _demonstrably_divergent(d_values, tol)

    if r_wrong or r_diverges or d_diverges:
        classification, c_est = "NEITHER", None
    elif r_converged and abs(r_limit - 1.0) <= tol and d_converged:
        if abs(d_limit) <= tol:
            classification, c_est = "RAC1", None
        else:
            classification, c_est = "RAC2", d_limit
    else:
        classification, c_est = "UNDETERMINED", None

    predicted = {
        "RAC1": "arcsine",
        "RAC2": "discrete_arcsine",
    }.get(classification, "unknown")
    return RacReport(
        classification=classification,
        c=c_est,
        probes=tuple(points),
        r_limit=r_limit,
        r_residual=r_residual,
        d_limit=d_limit,
        d_residual=d_residual,
        r_residual_history=r_history,
        d_residual_history=d_history,
        predicted_limit=predicted,
        tol=tol,
        schedule=schedule,
    )


@dataclass(frozen=True)
class LimitRow:
    k: int
    m: int
    computed: float
    predicted: float
    error: float


@dataclass(frozen=True)
class LimitTable:
    report: RacReport
    rows: tuple


def limit_table(
    seq: JacobiSequence,
    levels: Sequence[int],
    m_max: int,
    report: Optional[RacReport] = None,
    mode: str = "float",
) -> LimitTable:
    """Compare level-k normalized moments against the classified limit law.

    Predicted column: arcsine moments for RAC1, discrete arcsine moments at
    the estimated drift for RAC2.  Raises NoPredictedLimitError otherwise.
    """
    if m_max > 20:
        raise ValueError("m_max must be <= 20")
    if report is None:
        report = classify(seq)
    if report.classification == "RAC1":
        predicted = [float(arcsine.arcsine_moment(m)) for m in range(m_max + 1)]
    elif report.classification == "RAC2":
        law = arcsine.discrete_arcsine(report.c, tol=1e-12)
        predicted = [arcsine.discrete_moment(law, m) for m in range(m_max + 1)]
    else:
        raise NoPredictedLimitError(
            f"classification {report.classification} predicts no limit law"
        )
    rows = []
    for k in levels:
        for m in range(1, m_max + 1):
            value = fock.normalized_moment(seq, k, m, mode)
            value = float(value)
            rows.append(LimitRow(k, m, value, predicted[m], abs(value - predicted[m])))
    return LimitTable(report=report, rows=tuple(rows))
