import math
from fractions import Fraction

import pytest

from rumorlab.specfun import (
    EXACT_LIMIT,
    ExactScalar,
    GammaArgs,
    gamma_asymptotic_log,
    gamma_recurrence_residual,
    log_fraction,
    log_partial_exp_sum,
    log_scaled_incomplete_gamma,
    partial_exp_sum,
    scaled_incomplete_gamma,
)


def brute_partial_exp_sum(m: int, n: int) -> Fraction:
    """Independent term-by-term oracle for S(m, n)."""
    return sum(Fraction(n**i, math.factorial(i)) for i in range(m))


class TestPartialExpSum:
    @pytest.mark.parametrize("n", [0, 1, 5, 17])
    def test_single_term(self, n):
        assert partial_exp_sum(1, n).fraction == 1

    def test_small_values(self):
        assert partial_exp_sum(3, 4).fraction == 13
        assert partial_exp_sum(4, 5).fraction == Fraction(118, 3)

    @pytest.mark.parametrize("m,n", [(2, 3), (5, 5), (10, 11), (37, 12), (60, 61)])
    def test_matches_term_by_term_oracle(self, m, n):
        assert partial_exp_sum(m, n).fraction == brute_partial_exp_sum(m, n)

    def test_rejects_m_zero(self):
        with pytest.raises(ValueError):
            partial_exp_sum(0, 4)
        with pytest.raises(ValueError):
            partial_exp_sum(3, -1)

    @pytest.mark.parametrize("n", [1, 7, 100])
    def test_strictly_increasing_in_m(self, n):
        values = [partial_exp_sum(m, n).fraction for m in range(1, 40)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_log_mode_matches_exact(self):
        # documented target: 1e-10 relative accuracy for the log fallback
        for m, n in [(50, 51), (200, 120), (300, 301)]:
            exact_log = log_fraction(partial_exp_sum(m, n, exact=True).fraction)
            assert log_partial_exp_sum(m, n) == pytest.approx(exact_log, rel=1e-12, abs=1e-12)

    def test_auto_mode_switches_at_limit(self):
        assert partial_exp_sum(EXACT_LIMIT, 10).is_exact
        assert not partial_exp_sum(EXACT_LIMIT + 1, 10).is_exact


class TestScaledIncompleteGamma:
    def test_examples(self):
        assert scaled_incomplete_gamma(3, 4).fraction == 26
        assert scaled_incomplete_gamma(1, 9).fraction == 1
        assert scaled_incomplete_gamma(4, 5).fraction == 236

    def test_is_factorial_times_sum(self):
        for m, n in [(2, 2), (6, 7), (19, 20)]:
            expected = math.factorial(m - 1) * brute_partial_exp_sum(m, n)
            assert scaled_incomplete_gamma(m, n).fraction == expected

    def test_log_mode(self):
        got = log_scaled_incomplete_gamma(40, 41)
        want = log_fraction(scaled_incomplete_gamma(40, 41).fraction)
        assert got == pytest.approx(want, rel=1e-12)


class TestRecurrenceResidual:
    @pytest.mark.parametrize("m,n", [(3, 4), (1, 5), (7, 8), (12, 0), (40, 33)])
    def test_exactly_zero(self, m, n):
        assert gamma_recurrence_residual(m, n).fraction == 0

    def test_zero_on_small_grid(self):
        for m in range(1, 41):
            for n in range(0, 41):
                assert gamma_recurrence_residual(m, n).fraction == 0


class TestAsymptoticLog:
    def test_closed_form_values(self):
        assert gamma_asymptotic_log(1) == pytest.approx(-1.0 + 0.5 * math.log(math.pi / 2))
        assert gamma_asymptotic_log(3) == pytest.approx(
            3 * (math.log(3) - 1) + 0.5 * math.log(math.pi / 6)
        )

    def test_ratio_to_exact_decreases(self):
        # The approximation converges at an O(1/sqrt(m)) rate; the ratio to
        # the exact value at m = 100 is ~1.117 and shrinks monotonically.
        def ratio(m):
            exact_log = log_scaled_incomplete_gamma(m, m + 1) - (m + 1)
            return math.exp(gamma_asymptotic_log(m) - exact_log)

        gaps = [abs(ratio(m) - 1.0) for m in (10, 50, 100, 500)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert ratio(100) == pytest.approx(1.117377, abs=1e-4)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gamma_asymptotic_log(0)


class TestExactScalar:
    def test_lowest_terms_and_log_consistency(self):
        v = partial_exp_sum(4, 5)
        assert math.gcd(v.numerator, v.denominator) == 1
        assert v.log_value == pytest.approx(math.log(118 / 3), rel=1e-13)

    def test_zero_has_no_log(self):
        z = ExactScalar.from_fraction(0)
        assert z.log_value is None
        assert z.as_float() == 0.0

    def test_arithmetic_exact(self):
        a = ExactScalar.from_fraction(Fraction(3, 4))
        b = ExactScalar.from_fraction(Fraction(2, 5))
        assert (a * b).fraction == Fraction(3, 10)
        assert (a / b).fraction == Fraction(15, 8)
        assert (a ** -2).fraction == Fraction(16, 9)

    def test_arithmetic_log_mode(self):
        a = ExactScalar.from_log(2.0)
        b = ExactScalar.from_fraction(Fraction(1, 2))
        assert (a * b).log_value == pytest.approx(2.0 + math.log(0.5))
        assert (a ** 3).log_value == pytest.approx(6.0)

    def test_comparisons(self):
        small = ExactScalar.from_fraction(Fraction(1, 3))
        big = ExactScalar.from_log(1.0)
        assert small < 1
        assert big > 1
        assert small < big
        assert ExactScalar.from_log(-0.1) < 1

    def test_as_float_overflow_falls_back_to_log(self):
        huge = scaled_incomplete_gamma(400, 401)
        assert huge.as_float() == math.inf or huge.as_float() > 1e300

    def test_gamma_args_validation(self):
        with pytest.raises(ValueError):
            GammaArgs(0, 3)
        with pytest.raises(ValueError):
            GammaArgs(2, -1)
