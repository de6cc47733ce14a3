# closedform.py - exact closed forms over the basis {1, pi, ln 2, gamma}
#
# A convergent series sum c_i/(a_i n + b_i) equals -sum (c_i/a_i) psi(1 + b_i/a_i);
# digamma at integers, halves and quarters lies in the span of the basis.
from dataclasses import dataclass
from fractions import Fraction
import logging

from errors import DivergentSeries, UnsupportedConstantBasis
from exactmath import as_rational, partial_fractions, render_rational
from series import alternating_split

logger = logging.getLogger(__name__)

__all__ = [
    'ConstantVector',
    'alternating_split',
    'closed_form',
    'closed_form_detailed',
    'cv_combine',
    'cv_render',
    'digamma_cv',
]


@dataclass(frozen=True)
class ConstantVector:
    """q1 + qpi*pi + qln2*ln 2 + qgamma*gamma"""
    q1: Fraction = Fraction(0)
    qpi: Fraction = Fraction(0)
    qln2: Fraction = Fraction(0)
    qgamma: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ('q1', 'qpi', 'qln2', 'qgamma'):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def __add__(self, other):
        return ConstantVector(self.q1 + other.q1, self.qpi + other.qpi,
                              self.qln2 + other.qln2, self.qgamma + other.qgamma)

    def __mul__(self, k):
        k = as_rational(k)
        return ConstantVector(self.q1 * k, self.qpi * k, self.qln2 * k, self.qgamma * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def as_tuple(self):
        return (self.q1, self.qpi, self.qln2, self.qgamma)

    def __str__(self):
        return cv_render(self)


ZERO_VECTOR = ConstantVector()

# psi at the base arguments of each supported fractional part
_DIGAMMA_BASE = {
    Fraction(1): ConstantVector(0, 0, 0, -1),
    Fraction(1, 2): ConstantVector(0, 0, -2, -1),
    Fraction(1, 4): ConstantVector(0, Fraction(-1, 2), -3, -1),
    Fraction(3, 4): ConstantVector(0, Fraction(1, 2), -3, -1),
}


def digamma_cv(x):
    x = as_rational(x)
    if x <= 0:
        raise UnsupportedConstantBasis(f"digamma is only tabulated for positive arguments, got {render_rational(x)}")
    frac = x - (x.numerator // x.denominator)
    base = frac if frac else Fraction(1)
    if base not in _DIGAMMA_BASE:
        raise UnsupportedConstantBasis(
            f"psi({render_rational(x)}) leaves the basis {{1, pi, ln2, gamma}}"
        )
    # psi(x + 1) = psi(x) + 1/x
    shift = sum((1 / (base + j) for j in range(int(x - base))), Fraction(0))
    return _DIGAMMA_BASE[base] + ConstantVector(shift)


@dataclass(frozen=True)
class ClosedForm:
    vector: ConstantVector
    decomposition: object
    digamma_arguments: tuple


def closed_form_detailed(s):
    if s.is_alternating:
        s = alternating_split(s)
    if s.is_zero():
        return ClosedForm(ZERO_VECTOR, None, ())
    d = partial_fractions(s.numerator, s.factors)
    if d.harmonic_weight() != 0:
        raise DivergentSeries("partial fraction weights c/a do not sum to zero")
    total = ZERO_VECTOR
    arguments = []
    for c, f in d.parts:
        if not c:
            continue
        x = 1 + Fraction(f.b, f.a)
        arguments.append(x)
        total = total - digamma_cv(x) * (c / f.a)
    total = total * s.scale
    if total.qgamma != 0:
        raise DivergentSeries("Euler-Mascheroni constant failed to cancel")
    logger.debug("closed form %s via psi at %s", cv_render(total), [render_rational(x) for x in arguments])
    return ClosedForm(total, d, tuple(arguments))


def closed_form(s):
    return closed_form_detailed(s).vector


def cv_combine(terms):
    total = ZERO_VECTOR
    for coef, v in terms:
        total = total + v * coef
    return total


def cv_render(v):
    pieces = []
    if v.q1:
        pieces.append((v.q1 < 0, render_rational(abs(v.q1))))
    for coef, symbol in ((v.qpi, 'pi'), (v.qln2, 'ln2'), (v.qgamma, 'gamma')):
        if not coef:
            continue
        mag = abs(coef)
        if mag.numerator == 1:
            body = symbol
        else:
            body = f"{mag.numerator}*{symbol}"
        if mag.denominator != 1:
            body += f"/{mag.denominator}"
        pieces.append((coef < 0, body))
    if not pieces:
        return '0'
    negative, first = pieces[0]
    text = ('-' if negative else '') + first
    for negative, body in pieces[1:]:
        text += (' - ' if negative else ' + ') + body
    return text
