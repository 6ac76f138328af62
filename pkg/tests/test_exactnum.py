from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from toricembed.exactnum import (
    RootExpr, Surd, cmp_sqrt, field_sqrt, format_surd, parse_number, parse_rational,
    parse_surd, sign, squarefree_split, surd_mul_conj_identity_check, surd_sign,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
radicands = st.sampled_from([2, 3, 5, 6, 7, 13, 21, 117, 221])


def test_sign_examples():
    assert surd_sign(Surd(0, 0, 5)) == 0
    assert surd_sign(Surd(3, -1, 5)) == 1
    assert surd_sign(Surd(-7, 3, 5)) == -1


def test_conjugate_products():
    lam = Surd(Fraction(5, 2), Fraction(1, 2), 21)
    assert surd_mul_conj_identity_check(lam) == 1
    assert surd_mul_conj_identity_check(Surd(2, 0, 7)) == 4
    assert surd_mul_conj_identity_check(Surd(1, 1, 2)) == -1


def test_radicand_is_canonicalised():
    assert Surd(0, 1, 117) == Surd(0, 3, 13)
    assert Surd(1, 1, 4) == 3
    assert squarefree_split(117) == (3, 13)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        Surd(0, 1, 2) + Surd(0, 1, 3)


@settings(max_examples=1000, deadline=None)
@given(rationals, rationals, rationals, rationals, radicands)
def test_sign_matches_high_precision(a, b, c, d, s):
    x, y = Surd(a, b, s), Surd(c, d, s)
    mpmath.mp.prec = 200
    diff = (mpmath.mpf(a.numerator) / a.denominator - mpmath.mpf(c.numerator) / c.denominator
            + (mpmath.mpf(b.numerator) / b.denominator - mpmath.mpf(d.numerator) / d.denominator)
            * mpmath.sqrt(s))
    expected = 0 if diff == 0 else (1 if diff > 0 else -1)
    assert sign(x - y) == expected


@given(rationals, rationals, radicands)
def test_norm_identity(a, b, s):
    x = Surd(a, b, s)
    assert (x * x.conj()) == a * a - b * b * Surd(0, 1, s) ** 2


@given(rationals, rationals, rationals, rationals, radicands)
def test_conjugation_is_multiplicative(a, b, c, d, s):
    x, y = Surd(a, b, s), Surd(c, d, s)
    assert (x * y).conj() == x.conj() * y.conj()


@given(rationals)
def test_rational_text_round_trip(q):
    assert parse_rational(str(q)) == q


@given(rationals, rationals, radicands)
def test_surd_text_round_trip(a, b, s):
    x = Surd(a, b, s)
    assert parse_number(format_surd(x)) == x


def test_surd_text_forms():
    assert format_surd(Surd(Fraction(7, 2), Fraction(3, 2), 5)) == "7/2 + 3/2*sqrt(5)"
    assert parse_surd("2*sqrt(3)") == Surd(0, 2, 3)
    assert parse_surd("1 - sqrt(2)") == Surd(1, -1, 2)
    with pytest.raises(ValueError):
        parse_surd("1 + sqrt(8)")
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_floor_ceil_and_field_sqrt():
    tau4 = Surd(Fraction(7, 2), Fraction(3, 2), 5)
    assert tau4.floor() == 6 and tau4.ceil() == 7
    assert field_sqrt(tau4) == Surd(Fraction(3, 2), Fraction(1, 2), 5)
    assert field_sqrt(Surd(0, 1, 2)) is None
    assert cmp_sqrt(Fraction(3), Fraction(9)) == 0


def test_root_expr_sign():
    # 1 - sqrt(2) < 0 ; sqrt(2) + sqrt(3)*... via nested surd radicand
    assert RootExpr(1, -1, 2).sign() == -1
    assert RootExpr(Surd(0, 1, 2), -1, 2).sign() == 0
    assert RootExpr(Surd(3, 0, 1), -1, Surd(2, 1, 2)).sign() == 1
