"""Jacobi sequences: catalog entries, user expressions, tabulated data.

A Jacobi sequence supplies the off-diagonal weights omega(n) > 0 (sitting
at half-index n + 1/2) and the diagonal entries alpha(n) of a tridiagonal
operator.  Sequences are immutable; evaluation is pure, and every sequence
offers both an exact-rational and a double-precision view of its entries.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import seqexpr
from .seqexpr import ExprEvalError, Expression

CATALOG_NAMES = ("gaussian", "uniform", "exponential", "q_gaussian", "free_shift")

#: reference probability measure tied to a catalog entry, when one is named
_CATALOG_MEASURE = {
    "gaussian": "gaussian",
    "uniform": "uniform",
    "exponential": "exponential",
}


class CatalogError(ValueError):
    """Unknown catalog name or parameter outside its admissible range."""


class ExactModeError(ValueError):
    """Exact evaluation requested for a sequence that is not exactly
    representable (e.g. an expression taking irrational values)."""


class SequenceRangeError(IndexError):
    """A tabulated sequence was evaluated beyond its stored range."""


class NonRealizableMomentsError(ValueError):
    """The moment list has a nonpositive Hankel minor at some depth."""

    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(
            f"moment list is not realizable at depth {depth} "
            "(nonpositive Hankel determinant)"
        )


class SequenceFileError(ValueError):
    """Malformed sequence-definition file."""


@dataclass(frozen=True)
class JacobiSequence:
    """One-sided Jacobi sequence with exact and float evaluators.

    kind is one of 'catalog', 'expression', 'tabulated'.  Construct through
    catalog_sequence / expression_sequence / tabulated_sequence.
    """

    kind: str
    label: str
    params: tuple = ()
    omega_src: Optional[Expression] = None
    alpha_src: Optional[Expression] = None
    omega_table: Optional[tuple] = None
    alpha_table: Optional[tuple] = None

    # -- exact evaluators ---------------------------------------------------

    def omega_fraction(self, n: int) -> Fraction:
        """omega at half-index n + 1/2, exact."""
        self._check_index(n)
        if self.kind == "catalog":
            return _catalog_omega(self.label, self._params(), n)
        if self.kind == "tabulated":
            if n >= len(self.omega_table):
                raise SequenceRangeError(
                    f"omega index {n} beyond tabulated range {len(self.omega_table)}"
                )
            return self.omega_table[n]
        try:
            value = seqexpr.evaluate(self.omega_src, n, self._params(), "exact")
        except ExprEvalError as exc:
            raise ExactModeError(f"omega({n}): {exc}") from exc
        return value

    def alpha_fraction(self, n: int) -> Fraction:
        self._check_index(n)
        if self.kind == "catalog":
            return _catalog_alpha(self.label, self._params(), n)
        if self.kind == "tabulated":
            if n >= len(self.alpha_table):
                raise SequenceRangeError(
                    f"alpha index {n} beyond tabulated range {len(self.alpha_table)}"
                )
            return self.alpha_table[n]
        try:
            value = seqexpr.evaluate(self.alpha_src, n, self._params(), "exact")
        except ExprEvalError as exc:
            raise ExactModeError(f"alpha({n}): {exc}") from exc
        return value

    # -- float evaluators ---------------------------------------------------

    def omega_float(self, n: int) -> float:
        self._check_index(n)
        if self.kind == "expression":
            return seqexpr.evaluate(self.omega_src, n, self._params(), "float")
        return float(self.omega_fraction(n))

    def alpha_float(self, n: int) -> float:
        self._check_index(n)
        if self.kind == "expression":
            return seqexpr.evaluate(self.alpha_src, n, self._params(), "float")
        return float(self.alpha_fraction(n))

    # -- metadata -----------------------------------------------------------

    @property
    def exact_capable(self) -> bool:
        """Best-effort probe; expression sequences may still fail at a later
        index (validate() reports per-index)."""
        if self.kind in ("catalog", "tabulated"):
            return True
        try:
            self.omega_fraction(0), self.omega_fraction(1)
            self.alpha_fraction(0), self.alpha_fraction(1)
        except (ExactModeError, SequenceRangeError):
            return False
        return True

    @property
    def measure_name(self) -> Optional[str]:
        if self.kind == "catalog":
            return _CATALOG_MEASURE.get(self.label)
        return None

    def param(self, name: str) -> Fraction:
        for key, val in self.params:
            if key == name:
                return val
        raise KeyError(name)

    def _params(self) -> dict:
        return dict(self.params)

    @staticmethod
    def _check_index(n: int):
        if n < 0:
            raise ValueError(f"one-sided sequence index must be >= 0, got {n}")

    def describe(self) -> str:
        if self.kind == "catalog":
            args = ", ".join(f"{k}={v}" for k, v in self.params)
            return f"{self.label}({args})" if args else self.label
        if self.kind == "tabulated":
            return f"tabulated[{len(self.omega_table)}]"
        return f"omega={seqexpr.to_text(self.omega_src)!r}, alpha={seqexpr.to_text(self.alpha_src)!r}"


# ---------------------------------------------------------------------------
# Catalog closed forms


def _catalog_omega(name: str, params: dict, n: int) -> Fraction:
    if name == "gaussian":
        return Fraction(n + 1)
    if name == "uniform":
        return Fraction((n + 1) ** 2, (2 * n + 1) * (2 * n + 3))
    if name == "exponential":
        return Fraction((n + 1) ** 2)
    if name == "q_gaussian":
        q = params["q"]
        if q == 1:
            return Fraction(n + 1)
        return (1 - q ** (n + 1)) / (1 - q)
    if name == "free_shift":
        return Fraction(1, 2)
    raise CatalogError(f"unknown catalog sequence {name!r}")


def _catalog_alpha(name: str, params: dict, n: int) -> Fraction:
    if name in ("gaussian", "uniform", "q_gaussian"):
        return Fraction(0)
    if name == "exponential":
        return Fraction(2 * n + 1)
    if name == "free_shift":
        return params["c"] * n
    raise CatalogError(f"unknown catalog sequence {name!r}")


def _coerce_param(value) -> Fraction:
    # Floats go through their repr so that 0.3 means 3/10, not the binary
    # double; strings accept "p/q" and decimal forms.
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def catalog_sequence(name: str, params: dict | None = None) -> JacobiSequence:
    """Build one of the named example sequences.

    gaussian: omega = n+1, alpha = 0.
    uniform: omega = (n+1)^2/((2n+1)(2n+3)), alpha = 0.
    exponential: omega = (n+1)^2, alpha = 2n+1.
    q_gaussian(q): omega = 1+q+...+q^n, alpha = 0, for -1 < q <= 1.
    free_shift(c): omega = 1/2, alpha = c*n.
    """
    params = {k: _coerce_param(v) for k, v in (params or {}).items()}
    if name not in CATALOG_NAMES:
        raise CatalogError(f"unknown catalog sequence {name!r}")
    needed = {"q_gaussian": {"q"}, "free_shift": {"c"}}.get(name, set())
    if set(params) != needed:
        raise CatalogError(
            f"{name} takes parameters {sorted(needed)}, got {sorted(params)}"
        )
    if name == "q_gaussian":
        q = params["q"]
        if not (-1 < q <= 1):
            raise CatalogError(f"q_gaussian requires q in (-1, 1], got {q}")
    return JacobiSequence(
        kind="catalog", label=name, params=tuple(sorted(params.items()))
    )


def expression_sequence(
    omega_text: str, alpha_text: str, params: dict | None = None
) -> JacobiSequence:
    params = {k: _coerce_param(v) for k, v in (params or {}).items()}
    return JacobiSequence(
        kind="expression",
        label="expression",
        params=tuple(sorted(params.items())),
        omega_src=seqexpr.parse(omega_text),
        alpha_src=seqexpr.parse(alpha_text),
    )


def tabulated_sequence(omegas: Sequence, alphas: Sequence) -> JacobiSequence:
    return JacobiSequence(
        kind="tabulated",
        label="tabulated",
        omega_table=tuple(Fraction(w) for w in omegas),
        alpha_table=tuple(Fraction(a) for a in alphas),
    )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    index: int
    entry: str  # 'omega' or 'alpha'
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    n_max: int
    violations: tuple
    exact_capable: bool
    float_only_indices: tuple = ()

    @property
    def first_violation(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None


def validate(seq: JacobiSequence, n_max: int) -> ValidationReport:
    """Confirm omega(n) > 0 and alpha(n) finite for 0 <= n <= n_max.

    Violations are report entries, not exceptions; scanning stops at the
    first one.  Indices where exact evaluation fails but float evaluation
    works are flagged (float-only), not treated as violations.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    violations = []
    float_only = []
    for n in range(n_max + 1):
        for entry, evaluate_f in (("omega", seq.omega_float), ("alpha", seq.alpha_float)):
            try:
                value = evaluate_f(n)
            except SequenceRangeError:
                violations.append(Violation(n, entry, "beyond tabulated range"))
                break
            except (ExprEvalError, OverflowError) as exc:
                violations.append(Violation(n, entry, str(exc)))
                break
            if value != value or value in (float("inf"), float("-inf")):
                violations.append(Violation(n, entry, f"not finite: {value}"))
                break
            if entry == "omega" and value <= 0:
                violations.append(Violation(n, entry, f"must be positive, got {value}"))
                break
            if seq.kind == "expression":
                try:
                    getattr(seq, f"{entry}_fraction")(n)
                except ExactModeError:
                    float_only.append(n)
        if violations:
            break
    return ValidationReport(
        ok=not violations,
        n_max=n_max,
        violations=tuple(violations),
        exact_capable=seq.exact_capable,
        float_only_indices=tuple(float_only),
    )


# ---------------------------------------------------------------------------
# Moments -> Jacobi prefix (exact Stieltjes/Chebyshev-style recursion)


def jacobi_from_moments(moments: Sequence) -> JacobiSequence:
    """Recover the length-L prefix (omega_0..L-1, alpha_0..L-1) from the
    raw moments M_1..M_2L of a probability measure (M_0 = 1 implied).

    Runs the classical moment-to-recurrence recursion on exact rationals:
    sigma[k][l] = sigma[k-1][l+1] - alpha[k-1]*sigma[k-1][l]
                  - beta[k-1]*sigma[k-2][l],
    with alpha_k and beta_k read off the column ratios.  The reconstructed
    tridiagonal prefix reproduces the inputs: its level-0 moments match
    M_1..M_2L exactly.  Raises NonRealizableMomentsError with the failing
    depth when a Hankel minor is nonpositive.
    """
    raw = [Fraction(m) for m in moments]
    if not raw or len(raw) % 2:
        raise ValueError("need an even-length list M_1..M_2L")
    depth = len(raw) // 2
    nu = [Fraction(1)] + raw  # nu[l] = M_l with M_0 = 1

    sigma_prev = {l: Fraction(0) for l in range(2 * depth + 1)}  # row k-2
    sigma_cur = {l: nu[l] for l in range(2 * depth + 1)}  # row k-1
    alphas = [nu[1]]
    betas = []
    for k in range(1, depth + 1):
        row = {}
        for l in range(k, 2 * depth - k + 1):
            row[l] = (
                sigma_cur[l + 1]
                - alphas[k - 1] * sigma_cur[l]
                - (betas[k - 2] if k >= 2 else Fraction(0)) * sigma_prev[l]
            )
        if row[k] <= 0:
            raise NonRealizableMomentsError(k)
        betas.append(row[k] / sigma_cur[k - 1])
        if k <= depth - 1:
            alphas.append(row[k + 1] / row[k] - sigma_cur[k] / sigma_cur[k - 1])
        sigma_prev, sigma_cur = sigma_cur, row
    return tabulated_sequence(betas, alphas)


# ---------------------------------------------------------------------------
# Sequence-definition files (TOML subset; see README)


def load_sequence_file(path: str) -> JacobiSequence:
    """Load a sequence definition: either

        catalog = "exponential"
        params = {q = "1/2"}      # optional

    or

        omega = "1/2"
        alpha = "c*n"
        params = {c = 0.3}
    """
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise SequenceFileError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise SequenceFileError(f"{path}: {exc}") from exc

    allowed = {"catalog", "omega", "alpha", "params"}
    unknown = set(data) - allowed
    if unknown:
        raise SequenceFileError(f"{path}: unknown keys {sorted(unknown)}")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise SequenceFileError(f"{path}: params must be a table")
    try:
        params = {k: _coerce_param(v) for k, v in params.items()}
    except (ValueError, TypeError) as exc:
        raise SequenceFileError(f"{path}: bad parameter value: {exc}") from exc

    if "catalog" in data:
        if "omega" in data or "alpha" in data:
            raise SequenceFileError(
                f"{path}: give either catalog or omega/alpha, not both"
            )
        try:
            return catalog_sequence(data["catalog"], params)
        except CatalogError as exc:
            raise SequenceFileError(f"{path}: {exc}") from exc
    if "omega" not in data or "alpha" not in data:
        raise SequenceFileError(f"{path}: need both omega and alpha expressions")
    try:
        return expression_sequence(data["omega"], data["alpha"], params)
    except seqexpr.ExprSyntaxError as exc:
        raise SequenceFileError(f"{path}: {exc}") from exc
