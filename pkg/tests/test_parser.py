"""Unit tests for polynomial and vector parsing."""

import pytest

from algebra.laurent import LaurentPoly
from algebra.parser import parse_poly, parse_vector
from utils.exceptions import PolynomialSyntaxError


class TestParsePoly:
    def test_two_term_literal(self):
        assert parse_poly("x - 1", 2).terms == {(1, 0): 1, (0, 0): -1}

    def test_four_terms(self):
        f = parse_poly("3 - x + 2*x^2 + x*y", 2)
        assert f.terms == {(0, 0): 3, (1, 0): -1, (2, 0): 2, (1, 1): 1}

    def test_cancellation_gives_zero(self):
        assert parse_poly("x + 0*y - x", 2) == LaurentPoly.zero(2)

    def test_whitespace_and_implicit_product(self):
        assert parse_poly("  -3 x^2  y^-1 ", 2) == parse_poly("-3*x^2*y^-1", 2)

    def test_parenthesized_exponent(self):
        assert parse_poly("x^(-2)", 1) == parse_poly("x^-2", 1)

    def test_parentheses_expand(self):
        assert parse_poly("(x + 1)^2", 1) == parse_poly("x^2 + 2*x + 1", 1)

    def test_three_variables(self):
        assert parse_poly("z - 1", 3).terms == {(0, 0, 1): 1, (0, 0, 0): -1}

    @pytest.mark.parametrize(
        "text,position",
        [("x + w", 4), ("x +", 3), ("x ** 2", 3), ("(x + 1", 6)],
    )
    def test_syntax_errors_carry_position(self, text, position):
        with pytest.raises(PolynomialSyntaxError) as info:
            parse_poly(text, 2)
        assert info.value.position == position

    def test_variable_outside_dimension(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_poly("x*z", 2)

    def test_negative_power_of_sum_rejected(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_poly("(x + 1)^-1", 1)

    def test_empty_text_rejected(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_poly("   ", 2)

    def test_zero_denominator_rejected(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_poly("1/0", 2)


class TestParseVector:
    def test_forms(self):
        assert parse_vector("1,0,-1") == (1, 0, -1)
        assert parse_vector("(2, -3)") == (2, -3)
        assert parse_vector("[4]") == (4,)

    def test_bad_vector(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_vector("1,a")
