from fractions import Fraction

import mpmath
import pytest

from closedform import ConstantVector, closed_form_detailed
from constants import cv_eval, ln2_approx, pi_approx
from errors import GammaUnsupported, PrecisionOverflow
from series import Sign, evaluate, make_series


def exact(x, digits=120):
    mpmath.mp.dps = digits
    return Fraction(mpmath.nstr(x, digits - 5, strip_zeros=False, min_fixed=-10, max_fixed=10))


def test_pi_to_ten_digits():
    value = pi_approx(10)
    assert value.radius <= Fraction(1, 10 ** 10)
    assert abs(value.midpoint - Fraction('3.1415926536')) < Fraction(1, 10 ** 10)
    assert value.contains(exact(mpmath.pi))


def test_ln2_to_ten_digits():
    value = ln2_approx(10)
    assert value.radius <= Fraction(1, 10 ** 10)
    assert abs(value.midpoint - Fraction('0.6931471806')) < Fraction(1, 10 ** 10)
    assert value.contains(exact(mpmath.log(2)))


def test_low_precision_enclosures():
    assert pi_approx(1).contains(exact(mpmath.pi))
    assert format(float(pi_approx(1).midpoint), '.5f') == '3.14159'
    assert ln2_approx(1).contains(exact(mpmath.log(2)))
    assert format(float(ln2_approx(1).midpoint), '.2f') == '0.69'


def test_enclosures_nest():
    assert pi_approx(50).overlaps(pi_approx(49))
    assert ln2_approx(50).overlaps(ln2_approx(49))


def test_precision_limits():
    with pytest.raises(PrecisionOverflow):
        pi_approx(0)
    with pytest.raises(PrecisionOverflow):
        ln2_approx(10 ** 5)


def test_cv_eval():
    value = cv_eval(ConstantVector(0, Fraction(1, 3), -1), 10)
    assert abs(value.midpoint - Fraction('0.3540503706')) < Fraction(1, 10 ** 10)
    assert value.radius <= Fraction(1, 10 ** 10)
    assert cv_eval(ConstantVector(1), 30).midpoint == 1
    assert cv_eval(ConstantVector(1), 30).radius == 0
    s19 = cv_eval(ConstantVector(Fraction(-1, 8), Fraction(1, 16)), 20)
    assert abs(s19.midpoint - Fraction('0.0713495408')) < Fraction(1, 10 ** 9)
    with pytest.raises(GammaUnsupported):
        cv_eval(ConstantVector(0, 0, 0, 1), 10)


def test_oracles_agree_with_split_series_at_hundred_digits():
    mgl = make_series(Sign.ALTERNATING, 1, [(2, -1)])
    ln2 = make_series(Sign.ALTERNATING, 1, [(1, 0)])
    assert evaluate(mgl, 100).overlaps(pi_approx(100) * Fraction(1, 4))
    assert evaluate(ln2, 100).overlaps(ln2_approx(100))
    assert closed_form_detailed(mgl).vector == ConstantVector(0, Fraction(1, 4))
