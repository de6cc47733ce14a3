# constants.py - independent oracles for pi and ln 2
#
# Neither oracle uses any ledger series: pi comes from Machin's
# 16 arctan(1/5) - 4 arctan(1/239) and ln 2 from sum 1/(n 2^n).
from fractions import Fraction
from functools import lru_cache
import logging

import config
from errors import GammaUnsupported, PrecisionOverflow
from series import ApproxValue, floor_log10

logger = logging.getLogger(__name__)


def _check_digits(digits):
    if digits < 1 or digits > config.MAX_DIGITS:
        raise PrecisionOverflow(f"digits must lie in 1..{config.MAX_DIGITS}, got {digits}")


def _arctan_inverse(x, unit):
    """arctan(1/x) * unit as (midpoint, radius) integers"""
    total = 0
    terms = 0
    k = 0
    power = x
    while True:
        denominator = (2 * k + 1) * power
        if denominator > unit:
            break
        piece = unit // denominator
        total += piece if k % 2 == 0 else -piece
        terms += 1
        k += 1
        power *= x * x
    # floors cost < 1 unit each; the dropped alternating tail is below one unit
    return total, terms + 1


@lru_cache(maxsize=None)
def _pi_ball(digits):
    work = digits + config.GUARD_DIGITS
    unit = 10 ** work
    a, ra = _arctan_inverse(5, unit)
    b, rb = _arctan_inverse(239, unit)
    logger.debug("pi oracle computed at %d digits", digits)
    return ApproxValue(Fraction(16 * a - 4 * b, unit), Fraction(16 * ra + 4 * rb, unit))


@lru_cache(maxsize=None)
def _ln2_ball(digits):
    work = digits + config.GUARD_DIGITS
    unit = 10 ** work
    total = 0
    n = 0
    power = 1
    while True:
        n += 1
        power *= 2
        denominator = n * power
        if denominator > unit:
            break
        total += unit // denominator
    # terms n..infinity are at most 1/(n 2^(n-1)), i.e. below two units
    logger.debug("ln2 oracle computed at %d digits", digits)
    return ApproxValue(Fraction(total, unit), Fraction(n - 1 + 2, unit))


def pi_approx(digits):
    _check_digits(digits)
    return _pi_ball(digits)


def ln2_approx(digits):
    _check_digits(digits)
    return _ln2_ball(digits)


def cv_eval(v, digits):
    if v.qgamma != 0:
        raise GammaUnsupported("no oracle for the Euler-Mascheroni constant")
    _check_digits(digits)
    weight = abs(v.qpi) + abs(v.qln2)
    extra = floor_log10(weight) + 2 if weight else 0
    inner = digits + max(extra, 0)
    value = ApproxValue(v.q1)
    if v.qpi:
        value = value + _pi_ball(inner) * v.qpi
    if v.qln2:
        value = value + _ln2_ball(inner) * v.qln2
    return value
