# exactmath.py - exact polynomials, rational functions and partial fractions over Q
#
# Rational numbers are fractions.Fraction throughout; nothing in this module
# touches floating point.
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
import logging

from errors import DegreeTooHigh, DuplicateFactor, InvalidFactor

logger = logging.getLogger(__name__)


def as_rational(value):
    """Accept int, Fraction or 'p/q' text and return a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational")


def render_rational(q):
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------
# POLYNOMIALS
# --------------------


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial in n; coeffs[i] multiplies n**i, no trailing zeros"""
    coeffs: tuple = ()

    def __post_init__(self):
        coeffs = [as_rational(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def linear(cls, a, b):
        """a*n + b"""
        return cls((b, a))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _poly(other)
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (size - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(tuple(c * other for c in self.coeffs))
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - other.degree, 0)
        lead = other.leading
        for shift in range(len(rem) - len(other.coeffs), -1, -1):
            q = rem[shift + other.degree] / lead
            quot[shift] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[shift + j] -= q * c
        return Polynomial(tuple(quot)), Polynomial(tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def compose_linear(self, alpha, beta):
        """p(alpha*n + beta)"""
        inner = Polynomial.linear(alpha, beta)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self):
        return self * (1 / self.leading) if self.coeffs else self

    def integer_form(self):
        """Return (k, p) with self = k * p, p having coprime integer coefficients
        and a positive leading coefficient"""
        if self.is_zero():
            return Fraction(0), self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        content = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            content = -content
        return Fraction(content, den), Polynomial(tuple(Fraction(i, content) for i in ints))

    def render(self, var='n'):
        if self.is_zero():
            return '0'
        pieces = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            if power == 0:
                body = render_rational(mag)
            else:
                head = '' if mag == 1 else render_rational(mag)
                body = head + var + (f"^{power}" if power > 1 else '')
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ('-' if first_sign == '-' else '') + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.render()


ZERO = Polynomial(())
ONE = Polynomial((1,))


def _poly(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(as_rational(value))


def poly_eval(p, x):
    return p(as_rational(x))


def poly_gcd(p, q):
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


# --------------------
# LINEAR FACTORS
# --------------------


@dataclass(frozen=True, order=True)
class LinearFactor:
    """a*n + b with a >= 1 and a + b >= 1, so the factor is positive for n >= 1"""
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise InvalidFactor(f"factor coefficients must be integers, got ({self.a!r}, {self.b!r})")
        if self.a < 1:
            raise InvalidFactor(f"factor {self.render()} needs a >= 1")
        if self.a + self.b < 1:
            raise InvalidFactor(f"factor {self.render()} is not positive at n = 1")

    @property
    def root(self):
        return Fraction(-self.b, self.a)

    def __call__(self, n):
        return self.a * n + self.b

    def as_polynomial(self):
        return Polynomial.linear(self.a, self.b)

    def same_root(self, other):
        return self.root == other.root

    def render(self):
        head = 'n' if self.a == 1 else f"{self.a}n"
        if self.b > 0:
            return f"{head}+{self.b}"
        if self.b < 0:
            return f"{head}-{-self.b}"
        return head

    def __str__(self):
        return self.render()


def factors_product(factors):
    return reduce(lambda acc, f: acc * f.as_polynomial(), factors, ONE)


def check_distinct(factors):
    seen = {}
    for f in factors:
        other = seen.get(f.root)
        if other is not None:
            raise DuplicateFactor(f"factors {other} and {f} share the root {render_rational(f.root)}")
        seen[f.root] = f


# --------------------
# RATIONAL FUNCTIONS
# --------------------


@dataclass(frozen=True)
class RationalFunction:
    """numerator/denominator in lowest terms; the denominator has coprime
    integer coefficients and a positive leading coefficient"""
    numerator: Polynomial
    denominator: Polynomial = ONE

    def __post_init__(self):
        num, den = _poly(self.numerator), _poly(self.denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            k, den = den.integer_form()
            num = num * (1 / k)
        object.__setattr__(self, 'numerator', num)
        object.__setattr__(self, 'denominator', den)

    def is_zero(self):
        return self.numerator.is_zero()

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)

    def __add__(self, other):
        return RationalFunction(self.numerator * other.denominator + other.numerator * self.denominator,
                                self.denominator * other.denominator)

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, coef):
        return RationalFunction(self.numerator * as_rational(coef), self.denominator)

    def render(self, var='n'):
        num = self.numerator.render(var)
        if self.denominator == ONE:
            return num
        if self.numerator.degree > 0:
            num = f"({num})"
        return f"{num}/({self.denominator.render(var)})"

    def __str__(self):
        return self.render()


def ratfunc_combine(terms):
    """Normalized sum of coef * f over (coef, f) pairs"""
    acc = RationalFunction(ZERO)
    for coef, f in terms:
        acc = acc + f.scaled(coef)
    return acc


def ratfunc_equal(f, g):
    return f.numerator * g.denominator == g.numerator * f.denominator


# --------------------
# PARTIAL FRACTIONS
# --------------------


@dataclass(frozen=True)
class PartialFractionDecomposition:
    parts: tuple = ()
    polynomial_part: Polynomial = field(default=ZERO)

    def harmonic_weight(self):
        """Sum of c/a; zero exactly when the decomposed series converges"""
        return sum((c / f.a for c, f in self.parts), Fraction(0))


def partial_fractions(numerator, factors):
    """Cover-up rule: the coefficient of factor i is numerator(root_i) divided by
    the product of the other factors at root_i"""
    numerator = _poly(numerator)
    factors = tuple(factors)
    check_distinct(factors)
    if numerator.degree >= len(factors):
        raise DegreeTooHigh(
            f"numerator degree {numerator.degree} needs more than {len(factors)} factors"
        )
    parts = []
    for i, f in enumerate(factors):
        r = f.root
        rest = Fraction(1)
        for j, g in enumerate(factors):
            if j != i:
                rest *= g(r)
        parts.append((numerator(r) / rest, f))
    return PartialFractionDecomposition(tuple(parts), ZERO)


def pfd_recombine(d):
    terms = [(c, RationalFunction(ONE, f.as_polynomial())) for c, f in d.parts]
    terms.append((1, RationalFunction(d.polynomial_part)))
    return ratfunc_combine(terms)
