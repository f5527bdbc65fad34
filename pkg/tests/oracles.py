"""Independent oracles the tests check the engine against.

brute_moment enumerates every closed step sequence of the tridiagonal
action directly (no recursion shared with the library): an up-step from p
books the gap at p, a down-step from p books the gap at p-1, and a closed
walk must book every gap an even number of times, giving the weight
prod gap^(count/2) * prod alpha(level steps).
"""

from collections import Counter
from fractions import Fraction
from itertools import product

from mpmath import mp


def brute_moment(seq, k: int, m: int) -> Fraction:
    """<X^m e_k, e_k> for a one-sided sequence by full enumeration."""
    total = Fraction(0)
    for steps in product((1, 0, -1), repeat=m):
        value = _walk_weight(seq.omega_fraction, seq.alpha_fraction, k, steps, floor=0)
        if value is not None:
            total += value
    return total


def brute_two_sided_moment(tseq, m: int) -> Fraction:
    total = Fraction(0)
    for steps in product((1, 0, -1), repeat=m):
        value = _walk_weight(tseq.gap_fraction, tseq.alpha_fraction, 0, steps, floor=None)
        if value is not None:
            total += value
    return total


def brute_centered_moment(seq, k: int, m: int) -> Fraction:
    """<(X - alpha(k))^m e_k, e_k> by enumeration."""
    shift = seq.alpha_fraction(k)
    total = Fraction(0)
    for steps in product((1, 0, -1), repeat=m):
        value = _walk_weight(
            seq.omega_fraction, lambda p: seq.alpha_fraction(p) - shift, k, steps, floor=0
        )
        if value is not None:
            total += value
    return total


def _walk_weight(gap_at, alpha_at, start, steps, floor):
    pos = start
    gaps = Counter()
    levels = []
    for s in steps:
        if s == 1:
            gaps[pos] += 1
            pos += 1
        elif s == -1:
            if floor is not None and pos <= floor:
                return None  # annihilated at the boundary
            gaps[pos - 1] += 1
            pos -= 1
        else:
            levels.append(pos)
    if pos != start:
        return None
    weight = Fraction(1)
    for gap, count in gaps.items():
        assert count % 2 == 0, "closed walk books each gap an even number of times"
        value = gap_at(gap)
        if value == 0:
            return Fraction(0)
        weight *= value ** (count // 2)
    for level in levels:
        weight *= alpha_at(level)
        if weight == 0:
            return Fraction(0)
    return weight


def arcsine_moment_by_quadrature(m: int) -> float:
    """integral x^m / (pi sqrt(2 - x^2)) dx on (-sqrt2, sqrt2), via the
    substitution x = sqrt2 sin(t) which removes the endpoint singularity."""
    with mp.workdps(30):
        value = mp.quad(
            lambda t: (mp.sqrt(2) * mp.sin(t)) ** m / mp.pi,
            [-mp.pi / 2, mp.pi / 2],
        )
        return float(value)


def fourier_coefficient_by_quadrature(n: int, c: float) -> float:
    """a_n(c) as the direct Fourier integral
    (1/2pi) integral exp(i sqrt2 sin t / c) exp(-i n t) dt; the imaginary
    part vanishes by symmetry."""
    with mp.workdps(30):
        value = mp.quad(
            lambda t: mp.cos(mp.sqrt(2) * mp.sin(t) / c - n * t), [0, 2 * mp.pi]
        ) / (2 * mp.pi)
        return float(value)
