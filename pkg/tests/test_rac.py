import math
from fractions import Fraction

import pytest

from fockarc import (
    NoPredictedLimitError,
    arcsine_moment,
    catalog_sequence,
    classify,
    expression_sequence,
    limit_table,
    probe,
)

RAC1_CATALOG = [
    ("gaussian", None),
    ("uniform", None),
    ("exponential", None),
    ("q_gaussian", {"q": Fraction(-1, 2)}),
    ("q_gaussian", {"q": 0}),
    ("q_gaussian", {"q": Fraction(1, 2)}),
    ("q_gaussian", {"q": 1}),
]


class TestProbe:
    def test_exponential_closed_form(self):
        seq = catalog_sequence("exponential")
        r, d = probe(seq, 2)
        assert r == pytest.approx(9 / 4, rel=1e-15)
        assert d == pytest.approx(2 / math.sqrt(13), rel=1e-15)

    def test_gaussian_at_ten(self):
        r, d = probe(catalog_sequence("gaussian"), 10)
        assert r == pytest.approx(11 / 10, rel=1e-15)
        assert d == 0.0

    def test_free_shift_constants(self):
        seq = catalog_sequence("free_shift", {"c": Fraction(3, 10)})
        for n in (1, 17, 4096):
            r, d = probe(seq, n)
            assert r == 1.0
            assert d == pytest.approx(0.3, abs=1e-12)

    def test_probe_survives_float_overflow(self):
        seq = expression_sequence("2^n", "0")
        r, d = probe(seq, 100_000)
        assert r == 2.0 and d == 0.0


class TestClassify:
    @pytest.mark.parametrize("name,params", RAC1_CATALOG)
    def test_rac1_catalog(self, name, params):
        report = classify(catalog_sequence(name, params))
        assert report.classification == "RAC1"
        assert report.predicted_limit == "arcsine"

    @pytest.mark.parametrize("c", [0.1, -0.1, 0.5, -0.5, 2.0, -2.0])
    def test_free_shift_drift_estimate(self, c):
        seq = catalog_sequence("free_shift", {"c": Fraction(str(c))})
        report = classify(seq)
        assert report.classification == "RAC2"
        assert abs(report.c - c) <= 1e-9
        assert report.predicted_limit == "discrete_arcsine"

    def test_geometric_growth_is_neither(self):
        report = classify(expression_sequence("2^n", "0"))
        assert report.classification == "NEITHER"
        assert report.predicted_limit == "unknown"

    def test_diverging_diagonal_is_neither(self):
        report = classify(expression_sequence("1", "n^2"))
        assert report.classification == "NEITHER"

    def test_monotone_residual_histories(self):
        for name, params in RAC1_CATALOG:
            report = classify(catalog_sequence(name, params))
            for history in (report.r_residual_history, report.d_residual_history):
                assert all(b <= a for a, b in zip(history, history[1:])), (name, history)

    def test_residuals_shrink_with_longer_schedule(self):
        seq = catalog_sequence("exponential")
        short = classify(seq, schedule=(100, 1_000, 10_000, 100_000))
        longer = classify(seq, schedule=(100, 1_000, 10_000, 100_000, 1_000_000))
        assert longer.r_residual <= short.r_residual
        assert longer.d_residual <= short.d_residual

    def test_schedule_validation(self):
        seq = catalog_sequence("gaussian")
        with pytest.raises(ValueError):
            classify(seq, schedule=(10, 20, 30))
        with pytest.raises(ValueError):
            classify(seq, schedule=(10, 10, 20, 30))
        with pytest.raises(ValueError):
            classify(seq, tol=0.0)

    def test_rac1_tie_break_over_rac2(self):
        # drift within tolerance of zero reports the stronger verdict
        seq = catalog_sequence("free_shift", {"c": Fraction(1, 10**9)})
        report = classify(seq, tol=1e-6)
        assert report.classification == "RAC1"


class TestLimitTable:
    def test_gaussian_k1000_m4(self):
        table = limit_table(catalog_sequence("gaussian"), [1000], 4)
        row = next(r for r in table.rows if r.m == 4)
        assert row.predicted == 1.5
        assert row.computed == pytest.approx(float(Fraction(6_006_003, 2001**2)), rel=1e-13)
        assert row.error == pytest.approx(1.5 / 2001**2, rel=1e-6)

    def test_uniform_second_moment_row(self):
        table = limit_table(catalog_sequence("uniform"), [1000], 2)
        row = next(r for r in table.rows if r.m == 2)
        assert row.error <= 1e-12

    def test_free_shift_rows_at_truncation_level(self):
        seq = catalog_sequence("free_shift", {"c": Fraction(1, 2)})
        table = limit_table(seq, [12], 10)
        for row in table.rows:  # k = 12 >= m: exact finite-level equality
            assert row.error <= 1e-10

    def test_errors_shrink_like_inverse_square(self):
        table = limit_table(catalog_sequence("gaussian"), [10, 100, 1000], 8)
        for m in (4, 6, 8):
            errors = [r.error for r in table.rows if r.m == m]
            assert errors[0] > errors[1] > errors[2]

    def test_no_predicted_limit(self):
        with pytest.raises(NoPredictedLimitError):
            limit_table(expression_sequence("2^n", "0"), [10], 4)

    def test_mmax_cap(self):
        with pytest.raises(ValueError):
            limit_table(catalog_sequence("gaussian"), [10], 21)

    def test_rac1_predictions_are_arcsine(self):
        table = limit_table(catalog_sequence("exponential"), [50], 6)
        for row in table.rows:
            assert row.predicted == float(arcsine_moment(row.m))
