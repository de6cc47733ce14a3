# series.py - series definitions, exact partial sums, tail bounds and ball evaluation
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
import logging

from sympy import bernoulli

import config
from errors import (
    CapExceeded,
    DivergentSeries,
    PrecisionOverflow,
    PreconditionViolated,
)
from exactmath import (
    ONE,
    LinearFactor,
    Polynomial,
    RationalFunction,
    as_rational,
    check_distinct,
    factors_product,
    partial_fractions,
    render_rational,
)

logger = logging.getLogger(__name__)


class Sign(str, Enum):
    POSITIVE = 'positive'
    ALTERNATING = 'alternating'


@dataclass(frozen=True)
class SeriesDef:
    """sum over n >= 1 of scale * (+-1) * numerator(n) / prod(a_i n + b_i)"""
    sign: Sign
    numerator: Polynomial
    factors: tuple
    scale: Fraction = Fraction(1)

    @property
    def is_alternating(self):
        return self.sign is Sign.ALTERNATING

    def is_zero(self):
        return self.scale == 0 or self.numerator.is_zero()

    def denominator(self):
        return factors_product(self.factors)

    def max_root(self):
        return max((f.root for f in self.factors), default=Fraction(0))


def make_series(sign, numerator, factors, scale=1):
    sign = Sign(sign)
    if not isinstance(numerator, Polynomial):
        numerator = Polynomial.constant(as_rational(numerator))
    factors = tuple(f if isinstance(f, LinearFactor) else LinearFactor(*f) for f in factors)
    check_distinct(factors)
    allowed = len(factors) - (2 if sign is Sign.POSITIVE else 1)
    if numerator.degree > allowed:
        raise DivergentSeries(
            f"{sign.value} series with numerator degree {numerator.degree} "
            f"over {len(factors)} factor(s) does not converge"
        )
    return SeriesDef(sign, numerator, factors, as_rational(scale))


def term(s, n):
    if n < 1:
        raise PreconditionViolated(f"terms are indexed from 1, got {n}")
    value = s.scale * s.numerator(n)
    for f in s.factors:
        value /= f(n)
    if s.is_alternating and n % 2 == 0:
        value = -value
    return value


def general_term(s):
    if s.is_alternating:
        raise PreconditionViolated("an alternating series has no rational general term; split it first")
    return RationalFunction(s.numerator * s.scale, s.denominator())


def partial_sum_exact(s, N, cap=config.EXACT_SUM_CAP):
    if N < 0:
        raise PreconditionViolated(f"term count must be nonnegative, got {N}")
    if N > cap:
        raise CapExceeded(f"exact sums are capped at {cap} terms; use ball evaluation for N = {N}")
    total = Fraction(0)
    for n in range(1, N + 1):
        total += term(s, n)
    return total


# --------------------
# TAIL BOUNDS
# --------------------


def _cauchy_root_bound(p):
    if p.degree < 1:
        return Fraction(0)
    lead = abs(p.leading)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])


def _magnitudes_decrease_from(s, start):
    """True when |term(n)| is nonincreasing and the numerator keeps one sign for n >= start"""
    p = s.numerator
    q = s.denominator()
    sigma = 1 if p.leading > 0 else -1
    shifted_q = q.compose_linear(1, 1)
    drop = (p * shifted_q - p.compose_linear(1, 1) * q) * sigma
    if drop.is_zero() or drop.leading < 0:
        return False
    last = max(start, int(_cauchy_root_bound(p)) + 1, int(_cauchy_root_bound(drop)) + 1)
    if last - start > config.EXACT_SUM_CAP:
        raise PreconditionViolated(f"cannot certify decreasing terms from n = {start}")
    for n in range(start, last):
        if p(n) * sigma <= 0 or abs(term(s, n)) < abs(term(s, n + 1)):
            return False
    return True


def tail_bound(s, N):
    """Rational B with |sum - partial_sum_exact(s, N)| <= B"""
    if N < 1:
        raise PreconditionViolated(f"tail bounds need N >= 1, got {N}")
    if s.is_zero():
        return Fraction(0)

    if s.is_alternating:
        if not _magnitudes_decrease_from(s, N + 1):
            raise PreconditionViolated(f"terms are not decreasing in magnitude from n = {N + 1}")
        return abs(term(s, N + 1))

    deg = s.numerator.degree
    excess = len(s.factors) - deg
    if excess < 2:
        raise PreconditionViolated("positive tail bound needs at least two more factors than the numerator degree")
    s_star = max(Fraction(0), s.max_root())
    if N <= s_star:
        raise PreconditionViolated(f"N = {N} must exceed the largest factor root {render_rational(s_star)}")

    prod_a = 1
    for f in s.factors:
        prod_a *= f.a
    c = sum(abs(x) for x in s.numerator.coeffs)
    # n**deg / (n - s*)**deg is largest at n = N + 1 over the tail
    stretch = (Fraction(N + 1) / (N + 1 - s_star)) ** deg
    return abs(s.scale) * c * stretch / (prod_a * (excess - 1) * (N - s_star) ** (excess - 1))


# --------------------
# BALLS
# --------------------


@dataclass(frozen=True)
class ApproxValue:
    """Enclosure [midpoint - radius, midpoint + radius] of a real number"""
    midpoint: Fraction
    radius: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'midpoint', as_rational(self.midpoint))
        object.__setattr__(self, 'radius', as_rational(self.radius))
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")

    @property
    def lower(self):
        return self.midpoint - self.radius

    @property
    def upper(self):
        return self.midpoint + self.radius

    def __add__(self, other):
        if isinstance(other, ApproxValue):
            return ApproxValue(self.midpoint + other.midpoint, self.radius + other.radius)
        return ApproxValue(self.midpoint + as_rational(other), self.radius)

    __radd__ = __add__

    def __neg__(self):
        return ApproxValue(-self.midpoint, self.radius)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ApproxValue):
            return ApproxValue(
                self.midpoint * other.midpoint,
                abs(self.midpoint) * other.radius + abs(other.midpoint) * self.radius + self.radius * other.radius,
            )
        q = as_rational(other)
        return ApproxValue(self.midpoint * q, self.radius * abs(q))

    __rmul__ = __mul__

    def contains(self, x):
        return self.lower <= as_rational(x) <= self.upper

    def overlaps(self, other):
        return abs(self.midpoint - other.midpoint) <= self.radius + other.radius

    def distance_bound(self, other):
        """Largest |x - y| over x in self and y in other"""
        return abs(self.midpoint - other.midpoint) + self.radius + other.radius

    def rounded(self, digits):
        unit = 10 ** digits
        mid = Fraction(round(self.midpoint * unit), unit)
        return ApproxValue(mid, self.radius + abs(self.midpoint - mid))


def floor_log10(q):
    """Largest e with 10**e <= q, for rational q > 0"""
    e = len(str(q.numerator)) - len(str(q.denominator))
    while Fraction(10) ** e > q:
        e -= 1
    while Fraction(10) ** (e + 1) <= q:
        e += 1
    return e


def accuracy_digits(bound):
    """Largest d >= 0 with bound < 0.5 * 10**-d; None when bound is zero"""
    if bound == 0:
        return None
    # 10**e <= 2*bound < 10**(e+1) gives 2*bound*10**(-e-1) < 1
    return max(0, -floor_log10(2 * bound) - 1)


def format_decimal(value, digits):
    """Round-half-even decimal text, trimmed to the digits the radius covers"""
    places = digits
    while places > 0 and value.radius > Fraction(1, 10 ** places):
        places -= 1
    scaled = round(value.midpoint * 10 ** places)
    sign = '-' if scaled < 0 else ''
    text = str(abs(scaled)).rjust(places + 1, '0')
    if places == 0:
        return sign + text
    return f"{sign}{text[:-places]}.{text[-places:]}"


def format_radius(radius):
    """Upper bound on the radius with two significant digits, e.g. 1.3e-51"""
    if radius == 0:
        return '0'
    e = floor_log10(radius)
    mantissa = -((-radius * Fraction(10) ** (1 - e)) // 1)
    if mantissa >= 100:
        mantissa, e = 10, e + 1
    return f"{mantissa // 10}.{mantissa % 10}e{e}"


# --------------------
# ALTERNATING SPLIT
# --------------------


def alternating_split(s):
    """Pair terms 2m-1 and 2m of an alternating series into one positive series in m"""
    if not s.is_alternating:
        raise PreconditionViolated("only alternating series can be split")
    odd = [LinearFactor(2 * f.a, f.b - f.a) for f in s.factors]
    even = [LinearFactor(2 * f.a, f.b) for f in s.factors]
    combined = (RationalFunction(s.numerator.compose_linear(2, -1), factors_product(odd))
                - RationalFunction(s.numerator.compose_linear(2, 0), factors_product(even)))

    chosen, roots = [], set()
    for f in odd + even:
        if f.root not in roots:
            roots.add(f.root)
            chosen.append(f)
    cofactor, rest = divmod(factors_product(chosen), combined.denominator)
    if not rest.is_zero():
        raise PreconditionViolated("paired terms do not share the expected denominator")
    return make_series(Sign.POSITIVE, combined.numerator * cofactor, chosen, s.scale)


# --------------------
# EVALUATION
# --------------------


@dataclass(frozen=True)
class Evaluation:
    value: ApproxValue
    terms: int
    method: str


def ball_partial_sums(s, digits):
    """Yield (n, midpoint, radius) of partial sums as integers scaled by 10**digits.

    Each term is floored onto the grid, so the radius grows by one unit per term.
    """
    unit = 10 ** digits
    k, pint = s.numerator.integer_form()
    weight = s.scale * k
    top = weight.numerator * unit
    bottom = weight.denominator
    coeffs = [int(c) for c in reversed(pint.coeffs)]
    linear = [(f.a, f.b) for f in s.factors]
    alternating = s.is_alternating
    acc = 0
    n = 0
    while True:
        n += 1
        p = 0
        for c in coeffs:
            p = p * n + c
        q = bottom
        for a, b in linear:
            q *= a * n + b
        if alternating and n % 2 == 0:
            p = -p
        acc += (top * p) // q
        yield n, acc, n


def _ball_sum(s, N, digits):
    unit = 10 ** digits
    mid, rad = 0, 0
    for n, mid, rad in ball_partial_sums(s, digits):
        if n >= N:
            break
    return ApproxValue(Fraction(mid, unit), Fraction(rad, unit))


def _direct_terms_needed(s, eps, limit):
    """Smallest N <= limit with tail_bound(s, N) <= eps, or None"""
    def fits(N):
        try:
            return tail_bound(s, N) <= eps
        except PreconditionViolated:
            return False

    if not fits(limit):
        return None
    lo, hi = 1, limit
    while lo < hi:
        mid = (lo + hi) // 2
        if fits(mid):
            hi = mid
        else:
            lo = mid + 1
    # the alternating bound is not monotone before the terms settle
    return lo if fits(lo) else limit


def _log1p(x, eps):
    """ln(1 + x) for |x| <= 1/2 as (value, error bound <= eps)"""
    total = Fraction(0)
    power = Fraction(1)
    k = 0
    ax = abs(x)
    while True:
        k += 1
        power *= x
        total += power / k if k % 2 else -power / k
        bound = ax ** (k + 1) / ((k + 1) * (1 - ax))
        if bound <= eps or x == 0:
            return total, (bound if x else Fraction(0))


@lru_cache(maxsize=None)
def _bernoulli(k):
    b = bernoulli(k)
    return Fraction(int(b.p), int(b.q))


def _tail_enclosure(parts, N, eps):
    """Euler-Maclaurin enclosure of the sum over n > N of sum c/(a n + b), or None
    when N is too small for the remainder to drop below eps"""
    weights = [(c, f) for c, f in parts if c]
    log_eps = eps / (4 * max(len(weights), 1))
    mid = Fraction(0)
    radius = Fraction(0)
    for c, f in weights:
        w = c / f.a
        val, err = _log1p(Fraction(f.b, f.a * N), log_eps / abs(w))
        mid -= w * val
        radius += abs(w) * err
    mid -= sum((c / f(N) for c, f in weights), Fraction(0)) / 2

    # pieces[i] = a^(2m-1) / (aN+b)^(2m), advanced by (a/(aN+b))^2 per step
    steps = [Fraction(f.a, f(N)) ** 2 for c, f in weights]
    pieces = [Fraction(f.a, f(N) ** 2) for c, f in weights]
    previous = None
    for m in range(1, 4 * N + 1):
        if m > 1:
            pieces = [p * q for p, q in zip(pieces, steps)]
        g = Fraction(0)
        h = Fraction(0)
        for (c, f), piece in zip(weights, pieces):
            g += c * piece
            h += abs(c) * piece
        b2m = _bernoulli(2 * m)
        mid += b2m / (2 * m) * g
        remainder = abs(b2m) / (2 * m) * h
        if remainder <= eps / 2:
            logger.debug("tail enclosure: N=%d, %d correction terms", N, m)
            return ApproxValue(mid, radius + remainder)
        if previous is not None and remainder > previous:
            return None
        previous = remainder
    return None


def _euler_maclaurin(s, digits):
    target = Fraction(1, 10 ** digits)
    d = partial_fractions(s.numerator, s.factors)
    if d.harmonic_weight() != 0:
        raise DivergentSeries("partial fraction weights do not cancel")
    eps = target / (2 * abs(s.scale))
    spread = max((abs(f.root) for f in s.factors), default=Fraction(0))
    N = max(8, digits // 2 + 1, 2 * int(spread) + 4)
    while True:
        tail = _tail_enclosure(d.parts, N, eps)
        if tail is not None:
            break
        N *= 2
    unit = make_series(Sign.POSITIVE, s.numerator, s.factors, 1)
    head = partial_sum_exact(unit, N, cap=N)
    value = (tail + head) * s.scale
    return value.rounded(digits + config.GUARD_DIGITS), N


def evaluate_detailed(s, digits, direct_limit=config.DIRECT_SUM_LIMIT):
    if digits < 1 or digits > config.MAX_DIGITS:
        raise PrecisionOverflow(f"digits must lie in 1..{config.MAX_DIGITS}, got {digits}")
    if s.is_zero():
        return Evaluation(ApproxValue(0, 0), 0, 'exact')

    target = Fraction(1, 10 ** digits)
    work = digits + config.GUARD_DIGITS
    n_direct = _direct_terms_needed(s, target / 2, direct_limit)
    if n_direct is not None:
        value = _ball_sum(s, n_direct, work)
        value = ApproxValue(value.midpoint, value.radius + tail_bound(s, n_direct))
        logger.debug("direct evaluation with %d terms", n_direct)
        return Evaluation(value, n_direct, 'direct')

    if s.is_alternating:
        value, pairs = _euler_maclaurin(alternating_split(s), digits)
        return Evaluation(value, 2 * pairs, 'euler-maclaurin')
    value, n = _euler_maclaurin(s, digits)
    return Evaluation(value, n, 'euler-maclaurin')


def evaluate(s, digits):
    return evaluate_detailed(s, digits).value


# --------------------
# RENDERING
# --------------------


def render_series(s):
    """Canonical text accepted by cli.parse_series"""
    scale, numerator = s.scale, s.numerator
    if any(c.denominator != 1 for c in numerator.coeffs):
        k, numerator = numerator.integer_form()
        scale *= k
    head = 'alt: ' if s.is_alternating else ''
    if scale != 1:
        head += render_rational(scale) + '*'
    if numerator.degree <= 0:
        head += str(int(numerator(0)))
    else:
        head += f"({numerator.render().replace(' ', '')})"
    if len(s.factors) == 1:
        body = s.factors[0].render()
    else:
        body = ''.join(f.render() if (f.a, f.b) == (1, 0) else f"({f.render()})" for f in s.factors)
    return f"{head}/({body})"
