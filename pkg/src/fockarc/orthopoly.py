"""Orthonormal polynomials by three-term recurrence and quadrature moments
of |P_n|^2 dmu — the measure-side route to the same numbers the walk engine
produces, kept independent so the two can check each other.

Quadrature is panel-based Gauss-Legendre with a fixed node order per panel,
carried out in extended precision (mpmath).  Double precision is not enough
here: the comparison tolerance is absolute while raw moments of the
exponential measure reach 1e15, far beyond the resolution of a float64 ulp.
Unbounded supports are truncated where the whole integrand (density times
polynomial growth), not just the density, is negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from mpmath import mp, mpf

from .fock import variance_fraction
from .jacobi import JacobiSequence

_QUAD_DPS = 40
_NODE_DPS = 60
_GL_ORDER = 48
#: exponent headroom when sizing panels: supports moment orders up to this
_ORDER_HEADROOM = 24
_MAX_DEGREE = 30
_MAX_ORDER = 20


class QuadratureError(ArithmeticError):
    """Refinement levels disagreed beyond the requested tolerance."""

    def __init__(self, requested: float, achieved: float):
        self.requested = requested
        self.achieved = achieved
        super().__init__(
            f"quadrature did not converge: achieved {achieved:.3g}, "
            f"requested {requested:.3g}"
        )


@dataclass(frozen=True)
class MeasureSpec:
    """Probability density with its support; catalog measures only."""

    name: str
    support: tuple
    density: Callable  # mpf -> mpf, unit total mass

    def __hash__(self):
        return hash((self.name, self.support))

    def __eq__(self, other):
        return isinstance(other, MeasureSpec) and self.name == other.name


def catalog_measure(name: str) -> MeasureSpec:
    """gaussian: exp(-x^2/2)/sqrt(2 pi) on R; uniform: dx/2 on [-1, 1]
    (probability normalization); exponential: exp(-x) on [0, inf)."""
    if name == "gaussian":
        return MeasureSpec(
            "gaussian",
            (-math.inf, math.inf),
            lambda x: mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi),
        )
    if name == "uniform":
        return MeasureSpec("uniform", (-1.0, 1.0), lambda x: mpf(1) / 2)
    if name == "exponential":
        return MeasureSpec("exponential", (0.0, math.inf), lambda x: mp.exp(-x))
    raise ValueError(f"no catalog measure named {name!r}")


# ---------------------------------------------------------------------------
# Polynomial evaluation


def eval_normalized_poly(seq: JacobiSequence, n: int, x: float) -> float:
    """P_n(x) through the normalized recurrence
    sqrt(omega(n)) P_{n+1} = (x - alpha(n)) P_n - sqrt(omega(n-1)) P_{n-1},
    with P_{-1} = 0 and P_0 = 1.  The three-product combination goes through
    fsum to keep cancellation near the zeros in check."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    prev, cur = 0.0, 1.0
    sq_prev = 0.0
    for j in range(n):
        sq_next = math.sqrt(seq.omega_float(j))
        nxt = math.fsum([x * cur, -seq.alpha_float(j) * cur, -sq_prev * prev]) / sq_next
        prev, cur = cur, nxt
        sq_prev = sq_next
    return cur


def _poly_rows_mp(seq: JacobiSequence, n_hi: int, xs: Sequence) -> list:
    """P_0..P_{n_hi} at every node (one recurrence sweep serves all
    degrees), in the working mpmath precision."""
    sqrt_gaps = [
        mp.sqrt(_mpf_entry(seq.omega_fraction, seq.omega_float, j)) for j in range(n_hi)
    ]
    alphas = [_mpf_entry(seq.alpha_fraction, seq.alpha_float, j) for j in range(n_hi)]
    rows = [[mpf(1)] * len(xs)]
    prev = [mpf(0)] * len(xs)
    for j in range(n_hi):
        sq_prev = sqrt_gaps[j - 1] if j else mpf(0)
        inv = 1 / sqrt_gaps[j]
        alpha_j = alphas[j]
        cur = rows[-1]
        rows.append(
            [((x - alpha_j) * c - sq_prev * p) * inv for x, c, p in zip(xs, cur, prev)]
        )
        prev = cur
    return rows


def _mpf_entry(exact_at, float_at, j: int):
    try:
        value = exact_at(j)
    except Exception:
        return mpf(float_at(j))
    return mpf(value.numerator) / value.denominator


# ---------------------------------------------------------------------------
# Gauss-Legendre panel machinery


@lru_cache(maxsize=None)
def _gl_rule(order: int) -> tuple:
    """Nodes and weights on [-1, 1], Newton-refined at high precision."""
    with mp.workdps(_NODE_DPS):
        nodes = []
        for i in range(order):
            x = mpf(math.cos(math.pi * (i + 0.75) / (order + 0.5)))
            for _ in range(60):
                p, dp = _legendre_pair(order, x)
                dx = p / dp
                x -= dx
                if abs(dx) < mpf(10) ** (-_NODE_DPS + 3):
                    break
            _, dp = _legendre_pair(order, x)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append((x, w))
    return tuple(nodes)


def _legendre_pair(order: int, x):
    p0, p1 = mpf(1), x
    for j in range(2, order + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = order * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def _core_reach(measure: MeasureSpec, degree: int) -> float:
    """Where density * |x|^degree falls below e^-85 of unit scale."""
    target = 85.0
    if measure.name == "gaussian":
        x = math.sqrt(2 * target)
        for _ in range(60):
            x = math.sqrt(2 * (target + degree * math.log(max(x, 2.0))))
        return x
    if measure.name == "exponential":
        x = target
        for _ in range(60):
            x = target + degree * math.log(max(x, 2.0))
        return x
    return 1.0


def _panel_edges(measure: MeasureSpec, degree: int, refine: int) -> list:
    if measure.name == "uniform":
        count = 2 << refine
        return [-1 + 2 * i / count for i in range(count + 1)]
    reach = _core_reach(measure, degree)
    width = 4.0 / (1 << refine)
    count = math.ceil(reach / width)
    if measure.name == "gaussian":
        return [width * i for i in range(-count, count + 1)]
    return [width * i for i in range(count + 1)]


@lru_cache(maxsize=None)
def _density_nodes(measure: MeasureSpec, degree: int, refine: int) -> tuple:
    """Cached node table [(x_i, w_i * density(x_i))] covering the support
    until the tails are negligible at probe exponent ``degree``."""
    with mp.workdps(_QUAD_DPS):
        rule = _gl_rule(_GL_ORDER)
        edges = _panel_edges(measure, degree, refine)

        def build_panel(lo, hi):
            half = (mpf(hi) - mpf(lo)) / 2
            mid = (mpf(hi) + mpf(lo)) / 2
            return [
                (mid + half * t, half * w * measure.density(mid + half * t))
                for t, w in rule
            ]

        nodes = []
        for lo, hi in zip(edges, edges[1:]):
            nodes.extend(build_panel(lo, hi))
        probe = lambda chunk: mp.fsum(abs(x) ** degree * w for x, w in chunk)
        probe_total = probe(nodes) + mpf(10) ** (-60)

        # Extend over unbounded tails until panel contributions vanish at
        # the probe exponent; two consecutive negligible panels close a side.
        width = max(edges[1] - edges[0], 1.0)
        for sign in (1, -1):
            bounded = (
                math.isfinite(measure.support[1])
                if sign > 0
                else math.isfinite(measure.support[0])
            )
            if bounded:
                continue
            edge = edges[-1] if sign > 0 else edges[0]
            quiet = 0
            for _ in range(400):
                lo, hi = (edge, edge + width) if sign > 0 else (edge - width, edge)
                panel = build_panel(lo, hi)
                nodes.extend(panel)
                contribution = probe(panel)
                probe_total += contribution
                edge = hi if sign > 0 else lo
                quiet = quiet + 1 if contribution <= probe_total * mpf(10) ** -28 else 0
                if quiet >= 2:
                    break
            else:
                raise QuadratureError(1e-10, math.inf)
        return tuple(nodes)


#: degrees are served by shared tables in batches of this size
_DEGREE_BATCH = 10


def _batch_top(n: int) -> int:
    return max(_DEGREE_BATCH, _DEGREE_BATCH * math.ceil(n / _DEGREE_BATCH))


@lru_cache(maxsize=None)
def _poly_table(measure: MeasureSpec, seq: JacobiSequence, n_hi: int, refine: int):
    """Density nodes plus P_0..P_{n_hi} values on them, shared by every
    degree in the batch."""
    with mp.workdps(_QUAD_DPS):
        base = _density_nodes(measure, 2 * n_hi + _ORDER_HEADROOM, refine)
        rows = _poly_rows_mp(seq, n_hi, [x for x, _ in base])
        return base, rows


def _poly_sq_nodes(measure: MeasureSpec, seq: JacobiSequence, n: int, refine: int):
    """[(x_i, W_i)] with W_i = density node weight * P_n(x_i)^2."""
    base, rows = _poly_table(measure, seq, _batch_top(n), refine)
    with mp.workdps(_QUAD_DPS):
        return tuple((x, w * p * p) for (x, w), p in zip(base, rows[n]))


def _check_pairing(measure: MeasureSpec, seq: JacobiSequence):
    if seq.measure_name is not None and seq.measure_name != measure.name:
        raise ValueError(
            f"sequence {seq.describe()} pairs with the {seq.measure_name} "
            f"measure, not {measure.name}"
        )


def _moment_on_nodes(nodes, center, scale, m: int):
    if center == 0 and scale == 1:
        return mp.fsum(w * x**m for x, w in nodes)
    return mp.fsum(w * ((x - center) / scale) ** m for x, w in nodes)


def quadrature_moment_mp(
    measure: MeasureSpec, seq: JacobiSequence, n: int, m: int, tol: float = 1e-10
):
    """Extended-precision value of integral x^m P_n(x)^2 dmu(x), with a
    two-level refinement agreement check at absolute tolerance tol."""
    _check_pairing(measure, seq)
    if n > _MAX_DEGREE or m > _MAX_ORDER:
        raise ValueError(f"resolvable range is n <= {_MAX_DEGREE}, m <= {_MAX_ORDER}")
    if n < 0 or m < 0:
        raise ValueError("degree and order must be >= 0")
    with mp.workdps(_QUAD_DPS):
        coarse = _moment_on_nodes(_poly_sq_nodes(measure, seq, n, 0), 0, 1, m)
        fine = _moment_on_nodes(_poly_sq_nodes(measure, seq, n, 1), 0, 1, m)
        achieved = abs(fine - coarse)
        if achieved > tol:
            raise QuadratureError(tol, float(achieved))
        return fine


def quadrature_moment(
    measure: MeasureSpec, seq: JacobiSequence, n: int, m: int, tol: float = 1e-10
) -> float:
    return float(quadrature_moment_mp(measure, seq, n, m, tol))


def poly_inner(
    measure: MeasureSpec, seq: JacobiSequence, i: int, j: int, tol: float = 1e-10
) -> float:
    """Quadrature of P_i P_j dmu; delta_{ij} up to quadrature error."""
    _check_pairing(measure, seq)
    top = _batch_top(max(i, j))
    with mp.workdps(_QUAD_DPS):
        values = []
        for refine in (0, 1):
            base, rows = _poly_table(measure, seq, top, refine)
            values.append(
                mp.fsum(w * a * b for (_, w), a, b in zip(base, rows[i], rows[j]))
            )
        if abs(values[1] - values[0]) > tol:
            raise QuadratureError(tol, float(abs(values[1] - values[0])))
        return float(values[1])


def rescaled_density_moments(
    measure: MeasureSpec,
    seq: JacobiSequence,
    n: int,
    m_max: int,
    centered: bool = False,
    tol: float = 1e-10,
) -> list:
    """Moments of |P_n(s x)|^2 mu(s dx) for s = sqrt(omega(n) + omega(n-1)),
    i.e. s^-m * (raw m-th moment), for m = 0..m_max.

    The printed rescaling has no centering; for measures with drifting
    diagonal (exponential) that form cannot settle on a centered law, so
    centered=True also offers moments of (x - alpha(n))/s under the same
    density.  Tolerances are relative, floored at 1.
    """
    _check_pairing(measure, seq)
    if m_max > _MAX_ORDER or n > _MAX_DEGREE:
        raise ValueError(f"resolvable range is n <= {_MAX_DEGREE}, m <= {_MAX_ORDER}")
    with mp.workdps(_QUAD_DPS):
        var = variance_fraction(seq, n)
        scale = mp.sqrt(mpf(var.numerator) / var.denominator)
        center = _mpf_entry(seq.alpha_fraction, seq.alpha_float, n) if centered else 0
        out = []
        for m in range(m_max + 1):
            pair = []
            for refine in (0, 1):
                nodes = _poly_sq_nodes(measure, seq, n, refine)
                pair.append(_moment_on_nodes(nodes, center, scale, m))
            if abs(pair[1] - pair[0]) > tol * max(1, abs(pair[1])):
                raise QuadratureError(tol, float(abs(pair[1] - pair[0])))
            out.append(float(pair[1]))
        return out
