"""Moments of the tridiagonal operator X = A + B + C on one-sided and
two-sided state spaces.

Float mode propagates basis vectors through X directly (square roots of the
omega weights).  Exact mode uses a closed-walk recursion in which every
down-step across the gap between levels p-1 and p carries the full gap
weight omega(p-1) and up-steps are free: a closed walk crosses each gap an
even number of times, so the pairing turns every square root into a plain
omega factor and the moment is a polynomial in the sequence entries.  Both
views must agree; the test suite holds them together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from .jacobi import ExactModeError, JacobiSequence

Scalar = Union[Fraction, float]


@dataclass(frozen=True)
class RootScaled:
    """Exact value of the form coeff / sqrt(variance)."""

    coeff: Fraction
    variance: Fraction

    def __float__(self) -> float:
        return float(self.coeff) / math.sqrt(float(self.variance))


class FockVector:
    """Finitely supported coefficient vector over the basis levels.

    Zero coefficients are dropped so that support() is the true support.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self._coeffs = {n: c for n, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def basis(cls, n: int) -> "FockVector":
        return cls({n: 1.0})

    def coefficient(self, n: int) -> float:
        return self._coeffs.get(n, 0.0)

    def support(self) -> list:
        return sorted(self._coeffs)

    def items(self) -> Iterator:
        return iter(self._coeffs.items())

    def inner(self, other: "FockVector") -> float:
        small, big = self._coeffs, other._coeffs
        if len(big) < len(small):
            small, big = big, small
        return math.fsum(c * big[n] for n, c in small.items() if n in big)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __repr__(self) -> str:
        body = " + ".join(f"{c:.6g}*e{n}" for n, c in sorted(self._coeffs.items()))
        return f"FockVector({body or '0'})"


@dataclass(frozen=True, eq=False)
class TwoSidedJacobiSequence:
    """Two-sided sequence: gap(n) is the weight at half-index n + 1/2 for
    every integer n, alpha(n) the diagonal entry.

    condition is 'cutoff' (weights vanish below cutoff index N <= 0,
    positive above, diagonal zero below) or 'strictly_positive'.
    """

    condition: str
    cutoff: Optional[int]
    gap_source: Callable[[int], Scalar]
    alpha_source: Callable[[int], Scalar]
    label: str = "two-sided"

    def gap_fraction(self, n: int) -> Fraction:
        value = self.gap_source(n)
        if not isinstance(value, (Fraction, int)):
            raise ExactModeError(f"{self.label}: gap({n}) is not exact")
        return Fraction(value)

    def alpha_fraction(self, n: int) -> Fraction:
        value = self.alpha_source(n)
        if not isinstance(value, (Fraction, int)):
            raise ExactModeError(f"{self.label}: alpha({n}) is not exact")
        return Fraction(value)

    def gap_float(self, n: int) -> float:
        return float(self.gap_source(n))

    def alpha_float(self, n: int) -> float:
        return float(self.alpha_source(n))


def free_chain() -> TwoSidedJacobiSequence:
    """Constant chain: gap 1/2 everywhere, zero diagonal."""
    half = Fraction(1, 2)
    return TwoSidedJacobiSequence(
        condition="strictly_positive",
        cutoff=None,
        gap_source=lambda n: half,
        alpha_source=lambda n: Fraction(0),
        label="free chain",
    )


def drift_chain(c) -> TwoSidedJacobiSequence:
    """Constant chain with linearly drifting diagonal: gap 1/2, alpha(n) = c*n."""
    half = Fraction(1, 2)
    cf = c if isinstance(c, Fraction) else Fraction(c)
    return TwoSidedJacobiSequence(
        condition="strictly_positive",
        cutoff=None,
        gap_source=lambda n: half,
        alpha_source=lambda n: cf * n,
        label=f"drift chain c={cf}",
    )


def shifted_two_sided(seq: JacobiSequence, k: int) -> TwoSidedJacobiSequence:
    """Re-index level k of a one-sided sequence to level 0 of a cutoff(-k)
    two-sided sequence: gap(n) = omega(n + k), alpha(n) = alpha(n + k),
    zero below the cutoff.  Level-0 moments of the result equal level-k
    moments of the input exactly, for every order.
    """
    if k < 0:
        raise ValueError("level must be >= 0")

    def gap(n: int) -> Fraction:
        return seq.omega_fraction(n + k) if n + k >= 0 else Fraction(0)

    def alpha(n: int) -> Fraction:
        return seq.alpha_fraction(n + k) if n + k >= 0 else Fraction(0)

    return TwoSidedJacobiSequence(
        condition="cutoff",
        cutoff=-k,
        gap_source=gap,
        alpha_source=alpha,
        label=f"{seq.describe()} shifted by {k}",
    )


def normalized_shifted_two_sided(seq: JacobiSequence, k: int) -> TwoSidedJacobiSequence:
    """Shift level k to 0, recenter the diagonal by alpha(k) and divide the
    operator by sqrt(variance): gap(n) = omega(n+k)/variance,
    alpha(n) = (alpha(n+k) - alpha(k))/sqrt(variance).

    Gap entries stay rational; the diagonal is exact only when the shifted
    difference vanishes or the variance is a perfect square (otherwise the
    exact accessor raises and float remains available).
    """
    if k < 0:
        raise ValueError("level must be >= 0")
    var = variance_fraction(seq, k)
    alpha_k = seq.alpha_fraction(k)

    def gap(n: int) -> Fraction:
        return seq.omega_fraction(n + k) / var if n + k >= 0 else Fraction(0)

    def alpha(n: int):
        if n + k < 0:
            return Fraction(0)
        diff = seq.alpha_fraction(n + k) - alpha_k
        if diff == 0:
            return Fraction(0)
        root = _exact_sqrt_or_none(var)
        if root is not None:
            return diff / root
        return float(diff) / math.sqrt(float(var))

    return TwoSidedJacobiSequence(
        condition="cutoff",
        cutoff=-k,
        gap_source=gap,
        alpha_source=alpha,
        label=f"{seq.describe()} normalized shift by {k}",
    )


def _exact_sqrt_or_none(value: Fraction) -> Optional[Fraction]:
    rn, rd = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# Operator application (float mode)


def apply_X(seq, v: FockVector) -> FockVector:
    """Apply X = A + B + C to a vector, in doubles.

    A e_n = sqrt(omega(n-1)) e_{n-1} (A e_0 = 0 one-sided),
    B e_n = alpha(n) e_n, C e_n = sqrt(omega(n)) e_{n+1}.
    """
    return _apply_shifted(seq, v, 0.0)


def _apply_shifted(seq, v: FockVector, shift: float) -> FockVector:
    one_sided = isinstance(seq, JacobiSequence)
    if one_sided:
        gap_at, alpha_at = seq.omega_float, seq.alpha_float
    else:
        gap_at, alpha_at = seq.gap_float, seq.alpha_float
    out: dict = {}
    for n, a in v.items():
        if one_sided and n < 0:
            raise ValueError(f"one-sided vector has negative index {n}")
        if not one_sided or n > 0:
            down = gap_at(n - 1)
            if down:
                out[n - 1] = out.get(n - 1, 0.0) + math.sqrt(down) * a
        diag = alpha_at(n) - shift
        if diag:
            out[n] = out.get(n, 0.0) + diag * a
        up = gap_at(n)
        if up:
            out[n + 1] = out.get(n + 1, 0.0) + math.sqrt(up) * a
    return FockVector(out)


# ---------------------------------------------------------------------------
# Closed-walk recursion (exact mode)


def _closed_walk_value(gap_at, alpha_at, start: int, steps: int, floor) -> Fraction:
    # Dynamic programming over (position, steps taken); band grows by one
    # level per step.  Down-steps into p carry gap(p); up-steps carry 1.
    cur = {start: Fraction(1)}
    for _ in range(steps):
        nxt: dict = {}
        for p, acc in cur.items():
            nxt[p + 1] = nxt.get(p + 1, Fraction(0)) + acc
            diag = alpha_at(p)
            if diag:
                nxt[p] = nxt.get(p, Fraction(0)) + diag * acc
            if floor is None or p - 1 >= floor:
                down = gap_at(p - 1)
                if down:
                    nxt[p - 1] = nxt.get(p - 1, Fraction(0)) + down * acc
        cur = nxt
    return cur.get(start, Fraction(0))


def variance_fraction(seq: JacobiSequence, k: int) -> Fraction:
    """omega(k) + omega(k-1), with omega(-1) taken as 0 at the boundary."""
    below = seq.omega_fraction(k - 1) if k > 0 else Fraction(0)
    return below + seq.omega_fraction(k)


def variance_float(seq: JacobiSequence, k: int) -> float:
    below = seq.omega_float(k - 1) if k > 0 else 0.0
    return below + seq.omega_float(k)


# ---------------------------------------------------------------------------
# Moment operations


def moment(seq: JacobiSequence, k: int, m: int, mode: str = "exact") -> Scalar:
    """m-th moment of X in the level-k state: <X^m e_k, e_k>."""
    _check_order(k, m, mode)
    if mode == "float":
        v = FockVector.basis(k)
        for _ in range(m):
            v = apply_X(seq, v)
        return v.coefficient(k)
    return _closed_walk_value(seq.omega_fraction, seq.alpha_fraction, k, m, 0)


def normalized_moment(seq: JacobiSequence, k: int, m: int, mode: str = "exact"):
    """m-th moment of (X - alpha(k)) / sqrt(omega(k) + omega(k-1)) at level k.

    The first moment is 0 and the second is 1 by construction.  Exact mode
    returns a Fraction for even m and a RootScaled pair for odd m (the
    variance square root does not cancel).
    """
    _check_order(k, m, mode)
    if mode == "float":
        shift = seq.alpha_float(k)
        v = FockVector.basis(k)
        for _ in range(m):
            v = _apply_shifted(seq, v, shift)
        return v.coefficient(k) / variance_float(seq, k) ** (m / 2.0)
    alpha_k = seq.alpha_fraction(k)
    centered = _closed_walk_value(
        seq.omega_fraction, lambda p: seq.alpha_fraction(p) - alpha_k, k, m, 0
    )
    var = variance_fraction(seq, k)
    if m % 2 == 0:
        return centered / var ** (m // 2)
    return RootScaled(centered / var ** ((m - 1) // 2), var)


def two_sided_moment(tseq: TwoSidedJacobiSequence, m: int, mode: str = "exact") -> Scalar:
    """m-th moment of the two-sided operator in the level-0 state; walks
    stay inside [-m, m]."""
    if m < 0:
        raise ValueError("moment order must be >= 0")
    if mode == "float":
        v = FockVector.basis(0)
        for _ in range(m):
            v = apply_X(tseq, v)
        return v.coefficient(0)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    return _closed_walk_value(tseq.gap_fraction, tseq.alpha_fraction, 0, m, None)


def _check_order(k: int, m: int, mode: str):
    if m < 0:
        raise ValueError("moment order must be >= 0")
    if k < 0:
        raise ValueError("level must be >= 0")
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class MomentSequence:
    """Moments M_1..M_{m_max} of X (or its normalized form) at one level."""

    level: int
    normalized: bool
    mode: str
    entries: tuple  # entries[m - 1] = M_m

    def moment_of_order(self, m: int):
        if not 1 <= m <= len(self.entries):
            raise IndexError(f"order {m} outside 1..{len(self.entries)}")
        return self.entries[m - 1]


def moment_sequence(
    seq: JacobiSequence,
    k: int,
    m_max: int,
    mode: str = "exact",
    normalized: bool = False,
) -> MomentSequence:
    """Collect M_1..M_{m_max} at level k.  Normalized sequences satisfy
    M_1 = 0 and M_2 = 1 exactly (the defining property of the rescaling)."""
    compute = normalized_moment if normalized else moment
    return MomentSequence(
        level=k,
        normalized=normalized,
        mode=mode,
        entries=tuple(compute(seq, k, m, mode) for m in range(1, m_max + 1)),
    )
