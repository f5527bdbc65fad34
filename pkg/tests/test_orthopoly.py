import math

import pytest

from fockarc import (
    catalog_measure,
    catalog_sequence,
    eval_normalized_poly,
    moment,
    normalized_moment,
    poly_inner,
    quadrature_moment,
    quadrature_moment_mp,
    rescaled_density_moments,
)

GAUSSIAN = catalog_sequence("gaussian")
UNIFORM = catalog_sequence("uniform")
EXPONENTIAL = catalog_sequence("exponential")

PAIRS = [
    (catalog_measure("gaussian"), GAUSSIAN),
    (catalog_measure("uniform"), UNIFORM),
    (catalog_measure("exponential"), EXPONENTIAL),
]


class TestPolyEvaluation:
    def test_degree_zero_is_one(self):
        for _, seq in PAIRS:
            assert eval_normalized_poly(seq, 0, 0.37) == 1.0

    def test_gaussian_linear(self):
        for x in (-2.0, 0.0, 1.5):
            assert eval_normalized_poly(GAUSSIAN, 1, x) == pytest.approx(x, abs=1e-15)

    def test_gaussian_quadratic(self):
        # recurrence by hand: P_2 = (x^2 - 1)/sqrt(2)
        for x in (-1.0, 0.25, 3.0):
            assert eval_normalized_poly(GAUSSIAN, 2, x) == pytest.approx(
                (x * x - 1) / math.sqrt(2), rel=1e-14, abs=1e-14
            )

    def test_uniform_matches_legendre(self):
        # normalized Legendre: sqrt(2n+1) P_n in the classical normalization
        x = 0.6
        legendre2 = 0.5 * (3 * x * x - 1)
        assert eval_normalized_poly(UNIFORM, 2, x) == pytest.approx(
            math.sqrt(5) * legendre2, rel=1e-13
        )


class TestMeasures:
    def test_total_mass_one(self):
        for measure, seq in PAIRS:
            assert quadrature_moment(measure, seq, 0, 0) == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_variance(self):
        assert quadrature_moment(*PAIRS[0][::-1][::-1], 0, 2) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_second_moment(self):
        assert quadrature_moment(catalog_measure("uniform"), UNIFORM, 0, 2) == pytest.approx(
            1 / 3, abs=1e-14
        )

    def test_pairing_enforced(self):
        with pytest.raises(ValueError, match="pairs with"):
            quadrature_moment(catalog_measure("uniform"), GAUSSIAN, 0, 2)

    def test_range_caps(self):
        with pytest.raises(ValueError):
            quadrature_moment(catalog_measure("gaussian"), GAUSSIAN, 31, 2)
        with pytest.raises(ValueError):
            quadrature_moment(catalog_measure("gaussian"), GAUSSIAN, 2, 21)


class TestIsometryOracle:
    def test_gaussian_second_moment_any_level(self):
        measure = catalog_measure("gaussian")
        for n in (0, 3, 7):
            assert quadrature_moment(measure, GAUSSIAN, n, 2) == pytest.approx(
                2 * n + 1, abs=1e-11
            )

    @pytest.mark.parametrize("measure,seq", PAIRS, ids=lambda p: getattr(p, "name", ""))
    def test_walks_equal_quadrature(self, measure, seq):
        for n in (0, 1, 4, 10):
            for m in (0, 1, 2, 5, 10):
                quad = quadrature_moment_mp(measure, seq, n, m)
                exact = moment(seq, n, m)
                gap = abs(quad - exact.numerator / exact.denominator)
                assert float(gap) <= 1e-8, (measure.name, n, m, float(gap))


class TestOrthonormality:
    @pytest.mark.parametrize("measure,seq", PAIRS, ids=lambda p: getattr(p, "name", ""))
    def test_gram_matrix(self, measure, seq):
        for i in range(0, 11, 2):
            for j in range(i, 11, 3):
                value = poly_inner(measure, seq, i, j)
                target = 1.0 if i == j else 0.0
                assert value == pytest.approx(target, abs=1e-9)


class TestRescaledMoments:
    def test_gaussian_normalization(self):
        values = rescaled_density_moments(catalog_measure("gaussian"), GAUSSIAN, 20, 2)
        assert values[0] == pytest.approx(1.0, abs=1e-12)
        assert values[1] == pytest.approx(0.0, abs=1e-12)
        assert values[2] == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_fourth_moment_closed_form(self):
        n = 30
        values = rescaled_density_moments(catalog_measure("gaussian"), GAUSSIAN, n, 4)
        expected = (6 * n * n + 6 * n + 3) / (2 * n + 1) ** 2
        assert values[4] == pytest.approx(expected, rel=1e-12)

    def test_uniform_approaches_arcsine(self):
        values = rescaled_density_moments(catalog_measure("uniform"), UNIFORM, 30, 4)
        # frozen from the exact walk value at n = 30: 1.50083...
        exact = normalized_moment(UNIFORM, 30, 4)
        assert values[4] == pytest.approx(float(exact), rel=1e-12)
        assert abs(values[4] - 1.5) < 0.02

    def test_odd_moments_vanish_for_symmetric_entries(self):
        for name, seq in (("gaussian", GAUSSIAN), ("uniform", UNIFORM)):
            values = rescaled_density_moments(catalog_measure(name), seq, 9, 7)
            assert all(abs(values[m]) <= 1e-9 for m in (1, 3, 5, 7))

    def test_exponential_uncentered_drifts(self):
        # without centering the rescaled first moment is alpha_n / s -> oo
        values = rescaled_density_moments(
            catalog_measure("exponential"), EXPONENTIAL, 20, 1, centered=False
        )
        n = 20
        drift = (2 * n + 1) / math.sqrt((n + 1) ** 2 + n**2)
        assert values[1] == pytest.approx(drift, rel=1e-10)
        assert values[1] > 1.0

    def test_exponential_centered_matches_walks(self):
        n = 20
        values = rescaled_density_moments(
            catalog_measure("exponential"), EXPONENTIAL, n, 4, centered=True
        )
        for m in range(5):
            target = float(normalized_moment(EXPONENTIAL, n, m))
            assert values[m] == pytest.approx(target, rel=1e-11, abs=1e-11)

    def test_exponential_centered_approaches_arcsine(self):
        errors = []
        for n in (5, 15, 30):
            values = rescaled_density_moments(
                catalog_measure("exponential"), EXPONENTIAL, n, 4, centered=True
            )
            errors.append(abs(values[4] - 1.5))
        assert errors[0] > errors[1] > errors[2]
