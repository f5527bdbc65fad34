"""Self-contained property suite behind the `verify` CLI command.

Each check pits two independent routes against each other (walk engine vs
quadrature, coefficient series vs closed weight formula, exact vs float)
or asserts a structural invariant.  Kept fast: the deep sweeps live in the
test suite; this is the operational smoke screen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arcsine, fock, jacobi, orthopoly, rac, seqexpr


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name):
    def wrap(fn):
        fn.check_name = name
        return fn

    return wrap


@_check("catalog closed forms")
def _catalog_forms(_fault):
    seq = jacobi.catalog_sequence("uniform")
    ok = seq.omega_fraction(0) == Fraction(1, 3)
    seq = jacobi.catalog_sequence("q_gaussian", {"q": 0})
    ok &= all(seq.omega_fraction(n) == 1 for n in range(50))
    seq = jacobi.catalog_sequence("exponential")
    ok &= seq.omega_fraction(3) == 16 and seq.alpha_fraction(3) == 7
    return ok, "uniform/q=0/exponential entries match"


@_check("moment list round trip")
def _round_trip(_fault):
    worst = None
    for name in ("gaussian", "exponential", "uniform"):
        seq = jacobi.catalog_sequence(name)
        moments = [fock.moment(seq, 0, m) for m in range(1, 9)]
        back = jacobi.jacobi_from_moments(moments)
        for n in range(4):
            if back.omega_fraction(n) != seq.omega_fraction(n):
                worst = f"{name} omega({n})"
            if back.alpha_fraction(n) != seq.alpha_fraction(n):
                worst = f"{name} alpha({n})"
    return worst is None, worst or "depth-4 prefixes recovered exactly"


@_check("odd moments vanish without diagonal")
def _parity(_fault):
    seq = jacobi.catalog_sequence("uniform")
    exact_ok = all(fock.moment(seq, 3, m) == 0 for m in (1, 3, 5, 7))
    float_worst = max(abs(fock.moment(seq, 3, m, "float")) for m in (1, 3, 5, 7))
    return exact_ok and float_worst <= 1e-12, f"float residue {float_worst:.2g}"


@_check("one-sided vs shifted two-sided moments")
def _shift_agreement(_fault):
    seq = jacobi.catalog_sequence("exponential")
    for k, m in ((5, 4), (6, 6), (9, 3)):
        shifted = fock.shifted_two_sided(seq, k)
        if fock.moment(seq, k, m) != fock.two_sided_moment(shifted, m):
            return False, f"mismatch at k={k}, m={m}"
    return True, "exact equality at sampled (k, m)"


@_check("exact vs float engines")
def _engines(_fault):
    worst = 0.0
    for name, params in (("gaussian", None), ("exponential", None), ("q_gaussian", {"q": Fraction(1, 2)})):
        seq = jacobi.catalog_sequence(name, params)
        for k in (0, 3, 20):
            for m in (2, 5, 8):
                exact = float(fock.moment(seq, k, m))
                approx = fock.moment(seq, k, m, "float")
                if exact:
                    worst = max(worst, abs(approx - exact) / abs(exact))
    return worst <= 1e-10, f"max relative gap {worst:.2g}"


@_check("arcsine moments")
def _arcsine_moments(_fault):
    expected = {0: 1, 2: 1, 4: Fraction(3, 2), 6: Fraction(5, 2), 1: 0, 3: 0}
    ok = all(arcsine.arcsine_moment(m) == v for m, v in expected.items())
    return ok, "orders 0..6 match the closed form"


@_check("discrete law weight routes")
def _weight_routes(_fault):
    worst = 0.0
    for c in (0.5, 2.0):
        law = arcsine.discrete_arcsine(c, tol=1e-12)
        for n in range(0, min(law.n_trunc, 20) + 1):
            formula = arcsine.weight_from_series_formula(n, c)
            if max(law.weight(n), formula) < 1e-280:
                continue
            worst = max(worst, abs(law.weight(n) - formula) / max(law.weight(n), formula))
    return worst <= 1e-12, f"max relative gap {worst:.2g}"


@_check("discrete law mass and symmetry")
def _law_mass(_fault):
    for c in (0.5, 1.0, 10.0):
        law = arcsine.discrete_arcsine(c, tol=1e-12)
        if abs(law.total_mass() - 1.0) > 1e-12:
            return False, f"mass off at c={c}"
        if any(law.weight(n) != law.weight(-n) for n in range(law.n_trunc + 1)):
            return False, f"asymmetry at c={c}"
    return True, "mass within 1e-12, symmetric tables"


@_check("discrete moments vs chain walks")
def _law_vs_chain(_fault):
    worst = 0.0
    fault_shift = 1e-3 if _fault else 0.0
    for c in (Fraction(3, 10), Fraction(1)):
        law = arcsine.discrete_arcsine(c, tol=1e-12)
        chain = fock.drift_chain(c)
        for m in range(0, 9):
            lhs = arcsine.discrete_moment(law, m) + fault_shift
            rhs = float(fock.two_sided_moment(chain, m))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst <= 1e-10, f"max relative gap {worst:.2g}"


@_check("carleman recursion bounds")
def _carleman(_fault):
    report = arcsine.carleman_bound_check(1.0, 6)
    ok = report.bounds_hold and report.max_relative_error <= 1e-9
    return ok, f"max relative error {report.max_relative_error:.2g}"


@_check("classification of catalog sequences")
def _classification(_fault):
    verdicts = []
    for name, params, want in (
        ("gaussian", None, "RAC1"),
        ("exponential", None, "RAC1"),
        ("free_shift", {"c": Fraction(1, 2)}, "RAC2"),
    ):
        report = rac.classify(jacobi.catalog_sequence(name, params))
        verdicts.append(report.classification == want)
        if want == "RAC2" and report.classification == "RAC2":
            verdicts.append(abs(report.c - 0.5) <= 1e-9)
    return all(verdicts), "gaussian/exponential RAC1, free_shift RAC2"


@_check("walk engine vs quadrature isometry")
def _isometry(_fault):
    worst = 0.0
    for name in ("gaussian", "uniform"):
        seq = jacobi.catalog_sequence(name)
        measure = orthopoly.catalog_measure(name)
        for n in (0, 2):
            for m in (1, 2, 4):
                quad = orthopoly.quadrature_moment(measure, seq, n, m)
                walk = float(fock.moment(seq, n, m))
                worst = max(worst, abs(quad - walk))
    return worst <= 1e-8, f"max absolute gap {worst:.2g}"


@_check("expression round trips")
def _expr_round_trip(_fault):
    texts = [
        "(n+1)^2/((2*n+1)*(2*n+3))",
        "qsum(q, n)",
        "2*n+1",
        "-(n^2)+sqrt(4)",
        "c*n",
    ]
    for text in texts:
        tree = seqexpr.parse(text)
        if seqexpr.parse(seqexpr.to_text(tree)) != tree:
            return False, f"round trip failed for {text!r}"
    value = seqexpr.evaluate(seqexpr.parse("qsum(q, n)"), 2, {"q": Fraction(1, 2)})
    return value == Fraction(7, 4), "parser/printer/evaluator consistent"


_ALL_CHECKS = [
    fn
    for fn in (
        _catalog_forms,
        _round_trip,
        _parity,
        _shift_agreement,
        _engines,
        _arcsine_moments,
        _weight_routes,
        _law_mass,
        _law_vs_chain,
        _carleman,
        _classification,
        _isometry,
        _expr_round_trip,
    )
]


def run_checks(inject_fault: bool = False) -> list:
    """Run every check; inject_fault trips one comparison on purpose (used
    to prove the nonzero-exit path end to end)."""
    results = []
    for fn in _ALL_CHECKS:
        try:
            passed, detail = fn(inject_fault)
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(fn.check_name, bool(passed), detail))
    return results
