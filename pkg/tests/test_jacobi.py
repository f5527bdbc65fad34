from fractions import Fraction

import pytest

from fockarc import (
    CatalogError,
    NonRealizableMomentsError,
    SequenceFileError,
    SequenceRangeError,
    catalog_sequence,
    expression_sequence,
    jacobi_from_moments,
    load_sequence_file,
    moment,
    tabulated_sequence,
    validate,
)

from oracles import brute_moment


class TestCatalog:
    def test_uniform_omega_zero(self):
        assert catalog_sequence("uniform").omega_fraction(0) == Fraction(1, 3)

    def test_gaussian_alpha(self):
        assert catalog_sequence("gaussian").alpha_fraction(7) == 0

    def test_q_zero_is_constant(self):
        seq = catalog_sequence("q_gaussian", {"q": 0})
        assert all(seq.omega_fraction(n) == 1 for n in range(200))

    def test_q_one_matches_gaussian(self):
        q1 = catalog_sequence("q_gaussian", {"q": 1})
        g = catalog_sequence("gaussian")
        assert all(q1.omega_fraction(n) == g.omega_fraction(n) for n in range(100))

    def test_closed_forms_to_1e4(self):
        # the catalog evaluators against independently written closed forms
        seqs = {
            "gaussian": (lambda n: Fraction(n + 1), lambda n: Fraction(0)),
            "uniform": (
                lambda n: Fraction((n + 1) * (n + 1), (2 * n + 1) * (2 * n + 3)),
                lambda n: Fraction(0),
            ),
            "exponential": (lambda n: Fraction(n + 1) ** 2, lambda n: Fraction(2 * n + 1)),
            "free_shift": (lambda n: Fraction(1, 2), lambda n: Fraction(1, 2) * n),
        }
        for name, (omega_ref, alpha_ref) in seqs.items():
            params = {"c": Fraction(1, 2)} if name == "free_shift" else None
            seq = catalog_sequence(name, params)
            for n in range(10_001):
                assert seq.omega_fraction(n) == omega_ref(n)
                assert seq.alpha_fraction(n) == alpha_ref(n)

    def test_qsum_closed_form_sampled(self):
        # running-sum reference vs the closed form, q = 1/2
        seq = catalog_sequence("q_gaussian", {"q": Fraction(1, 2)})
        acc = Fraction(0)
        power = Fraction(1)
        checkpoints = {0, 1, 2, 3, 10, 100, 999, 2500, 10_000}
        for n in range(10_001):
            acc += power
            power /= 2
            if n in checkpoints:
                assert seq.omega_fraction(n) == acc

    def test_param_errors(self):
        with pytest.raises(CatalogError):
            catalog_sequence("q_gaussian", {"q": 2})
        with pytest.raises(CatalogError):
            catalog_sequence("q_gaussian", {"q": -1})
        with pytest.raises(CatalogError):
            catalog_sequence("free_shift")
        with pytest.raises(CatalogError):
            catalog_sequence("does_not_exist")
        with pytest.raises(CatalogError):
            catalog_sequence("gaussian", {"x": 1})

    def test_params_given_as_floats_are_decimal(self):
        seq = catalog_sequence("free_shift", {"c": 0.3})
        assert seq.alpha_fraction(5) == Fraction(3, 2)


class TestValidate:
    def test_gaussian_ok(self):
        report = validate(catalog_sequence("gaussian"), 1000)
        assert report.ok and report.first_violation is None

    def test_tabulated_zero_weight(self):
        seq = tabulated_sequence([1, 1, 0, 1], [0, 0, 0, 0])
        report = validate(seq, 10)
        assert not report.ok
        assert report.first_violation.index == 2
        assert report.first_violation.entry == "omega"

    def test_expression_negative_from_start(self):
        seq = expression_sequence("n-3", "0")
        report = validate(seq, 10)
        assert not report.ok
        assert report.first_violation.index == 0  # already negative there

    def test_expression_hits_zero(self):
        seq = expression_sequence("3-n", "0")
        report = validate(seq, 10)
        assert not report.ok
        assert report.first_violation.index == 3

    def test_tabulated_range_is_violation(self):
        seq = tabulated_sequence([1, 1], [0, 0])
        report = validate(seq, 10)
        assert not report.ok
        assert report.first_violation.index == 2
        assert "range" in report.first_violation.message

    def test_float_only_expression_flagged(self):
        seq = expression_sequence("sqrt(n+2)", "0")
        report = validate(seq, 5)
        assert report.ok  # positive, finite
        assert not report.exact_capable
        assert 0 in report.float_only_indices

    def test_range_error_on_direct_access(self):
        seq = tabulated_sequence([1], [0])
        with pytest.raises(SequenceRangeError):
            seq.omega_fraction(1)


class TestFromMoments:
    def test_gaussian_prefix(self):
        seq = jacobi_from_moments([0, 1, 0, 3, 0, 15])
        assert seq.omega_table == (1, 2, 3)
        assert seq.alpha_table == (0, 0, 0)
        # reconstructed operator reproduces the inputs (enumeration oracle)
        for m, target in ((1, 0), (2, 1), (3, 0), (4, 3), (5, 0), (6, 15)):
            assert brute_moment(seq, 0, m) == target

    def test_exponential_prefix(self):
        seq = jacobi_from_moments([1, 2, 6, 24])
        assert seq.omega_table == (1, 4)
        assert seq.alpha_table == (1, 3)
        for m in range(1, 5):
            import math

            assert brute_moment(seq, 0, m) == math.factorial(m)

    def test_degenerate_list(self):
        with pytest.raises(NonRealizableMomentsError) as info:
            jacobi_from_moments([0, 0, 0, 0])
        assert info.value.depth == 1

    def test_finite_support_moments_fail_at_depth(self):
        # two-point measure (x = +-1): rank limit hits at depth 2
        with pytest.raises(NonRealizableMomentsError) as info:
            jacobi_from_moments([0, 1, 0, 1])
        assert info.value.depth == 2

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            jacobi_from_moments([1, 2, 3])

    @pytest.mark.parametrize(
        "name,params",
        [
            ("gaussian", None),
            ("uniform", None),
            ("exponential", None),
            ("q_gaussian", {"q": Fraction(1, 2)}),
            ("q_gaussian", {"q": Fraction(-1, 2)}),
            ("free_shift", {"c": Fraction(1, 2)}),
        ],
    )
    def test_round_trip_depth_8(self, name, params):
        seq = catalog_sequence(name, params)
        moments = [moment(seq, 0, m) for m in range(1, 17)]
        back = jacobi_from_moments(moments)
        for n in range(8):
            assert back.omega_fraction(n) == seq.omega_fraction(n)
            assert back.alpha_fraction(n) == seq.alpha_fraction(n)


class TestSequenceFile:
    def test_catalog_form(self, tmp_path):
        path = tmp_path / "seq.toml"
        path.write_text('catalog = "exponential"\n')
        seq = load_sequence_file(str(path))
        assert seq.omega_fraction(1) == 4

    def test_expression_form(self, tmp_path):
        path = tmp_path / "chain.toml"
        path.write_text('omega = "1/2"\nalpha = "c*n"\nparams = {c = 0.3}\n')
        seq = load_sequence_file(str(path))
        assert seq.omega_fraction(4) == Fraction(1, 2)
        assert seq.alpha_fraction(4) == Fraction(6, 5)

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text('catalog = "gaussian"\nextra = 1\n')
        with pytest.raises(SequenceFileError, match="unknown keys"):
            load_sequence_file(str(path))

    def test_both_sources_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text('catalog = "gaussian"\nomega = "1"\nalpha = "0"\n')
        with pytest.raises(SequenceFileError):
            load_sequence_file(str(path))

    def test_missing_alpha_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text('omega = "n+1"\n')
        with pytest.raises(SequenceFileError):
            load_sequence_file(str(path))
