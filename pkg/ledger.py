# ledger.py - registry of identities, combination rules and pi formulas,
# with the symbolic, numeric and convergence checks run against it
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, lcm
import json
import logging

import config
from closedform import ConstantVector, closed_form, cv_combine, cv_render
from constants import cv_eval
from errors import (
    LedgerFormatError,
    NoConvergence,
    PrecisionOverflow,
    PreconditionViolated,
    SeriesError,
    UnknownName,
)
from exactmath import Polynomial, as_rational, ratfunc_combine, ratfunc_equal, render_rational
from series import (
    ApproxValue,
    accuracy_digits,
    ball_partial_sums,
    evaluate,
    format_decimal,
    format_radius,
    general_term,
    make_series,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdentityRecord:
    name: str
    series: object
    claimed: ConstantVector
    source: str = ''


@dataclass(frozen=True)
class CombinationRule:
    target: str
    combo: tuple
    source: str = ''

    def render(self):
        pieces = []
        for coef, name in self.combo:
            sign = '-' if coef < 0 else '+'
            mag = abs(coef)
            body = name if mag == 1 else f"{render_rational(mag)}*{name}"
            pieces.append((sign, body))
        text = ('-' if pieces[0][0] == '-' else '') + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return f"{self.target} = {text}"


@dataclass(frozen=True)
class AffineFormula:
    """target_constant = r0 + r1 * (named series)"""
    name: str
    r0: Fraction
    r1: Fraction
    series_name: str
    target_constant: ConstantVector
    source: str = ''
    aliases: tuple = ()

    def value(self, partial):
        return formula_value(self, partial)


def formula_value(formula, partial):
    """r0 + r1 * partial for a Fraction or an ApproxValue"""
    if isinstance(partial, ApproxValue):
        return partial * formula.r1 + formula.r0
    return formula.r0 + formula.r1 * as_rational(partial)


@dataclass(frozen=True)
class Ledger:
    identities: tuple = ()
    rules: tuple = ()
    formulas: tuple = ()

    def lookup(self, name):
        for record in self.identities:
            if record.name == name:
                return record
        raise UnknownName(f"no identity named {name!r} in the ledger")

    def formula(self, name):
        for f in self.formulas:
            if f.name == name or name in f.aliases:
                return f
        known = ', '.join(f.name for f in self.formulas)
        raise UnknownName(f"no formula named {name!r} (known: {known})")

    def names(self):
        return [record.name for record in self.identities]


@dataclass(frozen=True)
class CheckReport:
    kind: str
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def status(self):
        return 'PASS' if self.passed else 'FAIL'

    def line(self):
        extras = '  '.join(f"{k}={v}" for k, v in self.details.items())
        return f"{self.status}  {self.kind:<8} {self.name:<6} {extras}".rstrip()

    def as_dict(self):
        return {'kind': self.kind, 'name': self.name, 'status': self.status,
                'details': {k: str(v) for k, v in self.details.items()}}


# --------------------
# LEDGER DOCUMENTS
# --------------------

_SERIES_KEYS = {'name', 'sign', 'numerator', 'factors', 'scale', 'claimed', 'source'}
_RULE_KEYS = {'target', 'combo', 'source'}
_FORMULA_KEYS = {'name', 'r0', 'r1', 'series', 'target', 'source', 'aliases'}
_VECTOR_KEYS = {'one', 'pi', 'ln2', 'gamma'}


def _check_keys(entry, allowed, required, where):
    if not isinstance(entry, dict):
        raise LedgerFormatError(f"{where}: expected an object")
    unknown = set(entry) - allowed
    if unknown:
        raise LedgerFormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(entry)
    if missing:
        raise LedgerFormatError(f"{where}: missing field(s) {sorted(missing)}")


def _rational(value, where):
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise LedgerFormatError(f"{where}: {value!r} is not a rational")


def _vector(entry, where):
    _check_keys(entry, _VECTOR_KEYS, _VECTOR_KEYS, where)
    return ConstantVector(*(_rational(entry[k], f"{where}.{k}") for k in ('one', 'pi', 'ln2', 'gamma')))


def _vector_document(v):
    return {'one': render_rational(v.q1), 'pi': render_rational(v.qpi),
            'ln2': render_rational(v.qln2), 'gamma': render_rational(v.qgamma)}


def parse_ledger(document):
    _check_keys(document, {'series', 'rules', 'formulas'}, {'series'}, 'ledger')
    identities = []
    seen = set()
    for i, entry in enumerate(document['series']):
        where = f"series[{i}]"
        _check_keys(entry, _SERIES_KEYS, _SERIES_KEYS - {'scale', 'source'}, where)
        name = entry['name']
        if name in seen:
            raise LedgerFormatError(f"{where}: duplicate name {name!r}")
        seen.add(name)
        try:
            factors = [tuple(pair) for pair in entry['factors']]
            if any(len(pair) != 2 for pair in factors):
                raise LedgerFormatError(f"{where}: factors must be [a, b] pairs")
            series = make_series(
                entry['sign'],
                Polynomial(tuple(_rational(c, where) for c in entry['numerator'])),
                factors,
                _rational(entry.get('scale', '1'), where),
            )
        except ValueError as e:
            raise LedgerFormatError(f"{where}: {e}")
        claimed = _vector(entry['claimed'], f"{where}.claimed")
        if claimed.qgamma != 0:
            raise LedgerFormatError(f"{where}: claimed values may not carry gamma")
        identities.append(IdentityRecord(name, series, claimed, entry.get('source', '')))

    rules = []
    for i, entry in enumerate(document.get('rules', [])):
        where = f"rules[{i}]"
        _check_keys(entry, _RULE_KEYS, {'target', 'combo'}, where)
        combo = tuple((_rational(coef, where), name) for coef, name in entry['combo'])
        for name in [entry['target']] + [name for _, name in combo]:
            if name not in seen:
                raise UnknownName(f"{where}: no identity named {name!r}")
        if entry['target'] in {name for _, name in combo}:
            raise LedgerFormatError(f"{where}: target {entry['target']!r} appears in its own combination")
        rules.append(CombinationRule(entry['target'], combo, entry.get('source', '')))

    formulas = []
    for i, entry in enumerate(document.get('formulas', [])):
        where = f"formulas[{i}]"
        _check_keys(entry, _FORMULA_KEYS, _FORMULA_KEYS - {'source', 'aliases'}, where)
        r1 = _rational(entry['r1'], where)
        if r1 == 0:
            raise LedgerFormatError(f"{where}: r1 must be nonzero")
        if entry['series'] not in seen:
            raise UnknownName(f"{where}: no identity named {entry['series']!r}")
        formulas.append(AffineFormula(entry['name'], _rational(entry['r0'], where), r1, entry['series'],
                                      _vector(entry['target'], f"{where}.target"), entry.get('source', ''),
                                      tuple(str(alias) for alias in entry.get('aliases', ()))))

    return Ledger(tuple(identities), tuple(rules), tuple(formulas))


def ledger_document(ledger):
    series = []
    for record in ledger.identities:
        s = record.series
        series.append({
            'name': record.name,
            'sign': s.sign.value,
            'numerator': [render_rational(c) if c.denominator != 1 else int(c) for c in s.numerator.coeffs],
            'factors': [[f.a, f.b] for f in s.factors],
            'scale': render_rational(s.scale),
            'claimed': _vector_document(record.claimed),
            'source': record.source,
        })
    rules = [{'target': r.target, 'combo': [[render_rational(c), n] for c, n in r.combo], 'source': r.source}
             for r in ledger.rules]
    formulas = [{'name': f.name, 'r0': render_rational(f.r0), 'r1': render_rational(f.r1),
                 'series': f.series_name, 'target': _vector_document(f.target_constant), 'source': f.source,
                 'aliases': list(f.aliases)}
                for f in ledger.formulas]
    return {'series': series, 'rules': rules, 'formulas': formulas}


@lru_cache(maxsize=1)
def builtin_ledger():
    return load_ledger(config.BUILTIN_LEDGER_PATH)


def load_ledger(path):
    if path == 'builtin':
        return builtin_ledger()
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except json.JSONDecodeError as e:
        raise LedgerFormatError(f"{path}: not valid JSON ({e})")
    except OSError as e:
        raise LedgerFormatError(f"{path}: cannot read ledger ({e.strerror or e})")
    return parse_ledger(document)


# --------------------
# VERIFICATION
# --------------------


def verify_termwise(rule, ledger):
    target = ledger.lookup(rule.target)
    parts = [(coef, ledger.lookup(name)) for coef, name in rule.combo]
    combined = ratfunc_combine([(coef, general_term(record.series)) for coef, record in parts])
    expected = general_term(target.series)
    constants = cv_combine([(coef, record.claimed) for coef, record in parts])
    return CheckReport('rule', rule.target, ratfunc_equal(combined, expected), {
        'rule': rule.render(),
        'combined': combined.render(),
        'target': expected.render(),
        'constants_match': constants == target.claimed,
    })


def verify_closedform(record):
    derived = closed_form(record.series)
    return CheckReport('closed', record.name, derived == record.claimed, {
        'derived': cv_render(derived),
        'claimed': cv_render(record.claimed),
    })


def verify_numeric(record, digits=config.NUMERIC_VERIFY_DIGITS):
    if digits < 10:
        raise PreconditionViolated(f"numeric verification needs at least 10 digits, got {digits}")
    summed = evaluate(record.series, digits)
    claimed = cv_eval(record.claimed, digits)
    return CheckReport('numeric', record.name, summed.overlaps(claimed), {
        'series': format_decimal(summed, digits),
        'claimed': format_decimal(claimed, digits),
        'radii': format_radius(summed.radius + claimed.radius),
    })


def verify_identity(record, digits=config.NUMERIC_VERIFY_DIGITS, numeric=True):
    """closed-form check, plus the numeric check when asked; PASS needs both"""
    try:
        symbolic = verify_closedform(record)
    except SeriesError as e:
        return CheckReport('identity', record.name, False, {'error': e})
    details = {'value': symbolic.details['derived']}
    passed = symbolic.passed
    if not symbolic.passed:
        details['claimed'] = symbolic.details['claimed']
    if numeric:
        key = f"numeric{digits}"
        try:
            check = verify_numeric(record, digits)
        except SeriesError as e:
            return CheckReport('identity', record.name, False, {**details, key: e})
        passed = passed and check.passed
        details[key] = 'ok' if check.passed else f"{check.details['series']} vs {check.details['claimed']}"
    return CheckReport('identity', record.name, passed, details)


def verify_rule(rule, ledger):
    try:
        report = verify_termwise(rule, ledger)
    except SeriesError as e:
        return CheckReport('rule', rule.target, False, {'rule': rule.render(), 'error': str(e)})
    passed = report.passed and report.details['constants_match']
    return CheckReport('rule', rule.target, passed, {'rule': report.details['rule'],
                                                     'termwise': report.passed,
                                                     'constants': report.details['constants_match']})


def verify_all(ledger, digits=config.NUMERIC_VERIFY_DIGITS, numeric=True, jobs=1):
    """Identity reports in ledger order followed by rule reports"""
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        identities = list(pool.map(lambda r: verify_identity(r, digits, numeric), ledger.identities))
        rules = list(pool.map(lambda r: verify_rule(r, ledger), ledger.rules))
    return identities + rules


# --------------------
# CONVERGENCE BENCHMARK
# --------------------


@dataclass(frozen=True)
class ScanResult:
    formula: AffineFormula
    digits: int
    minimal_n: int
    samples: tuple
    target: ApproxValue

    def rows(self):
        work = self.digits + config.GUARD_DIGITS
        out = []
        for n, value in self.samples:
            bound = value.distance_bound(self.target)
            out.append({
                'N': n,
                'approx': format_decimal(value, work),
                'radius': format_radius(value.radius),
                'abs_error_bound': format_radius(bound),
                'accuracy_digits': accuracy_digits(bound),
            })
        return out


def accuracy_scan(formula, d, max_n, ledger, checkpoints=()):
    """Forward scan for the least N whose enclosure of r0 + r1 * partial_sum(N)
    lies within 0.5 * 10**-d of the target, sampling the requested checkpoints"""
    if max_n > config.MAX_SCAN_TERMS:
        raise PreconditionViolated(f"scans stop at {config.MAX_SCAN_TERMS} terms, got {max_n}")
    if d < 1 or d + config.GUARD_DIGITS > config.MAX_DIGITS:
        raise PrecisionOverflow(f"accuracy target {d} digits is out of range")
    wanted = set(checkpoints)
    if wanted and (min(wanted) < 1 or max(wanted) > max_n):
        raise PreconditionViolated(f"checkpoints must lie in 1..{max_n}")

    series = ledger.lookup(formula.series_name).series
    work = d + config.GUARD_DIGITS
    unit = 10 ** work
    target = cv_eval(formula.target_constant, work)

    # everything below is an integer multiple of 1/(scale_den * unit)
    scale_den = lcm(formula.r0.denominator, formula.r1.denominator)
    r1 = int(formula.r1 * scale_den)
    r0 = int(formula.r0 * scale_den) * unit
    grid = scale_den * unit
    t_hi = ceil(target.upper * grid)
    t_lo = floor(target.lower * grid)
    limit = scale_den * 10 ** (work - d)
    last = max(wanted, default=0)

    minimal = None
    samples = {}
    for n, mid, rad in ball_partial_sums(series, work):
        x_mid = r0 + r1 * mid
        x_rad = abs(r1) * rad
        worst = max(x_mid + x_rad - t_lo, t_hi - x_mid + x_rad)
        if minimal is None and 2 * worst < limit:
            minimal = n
            samples[n] = ApproxValue(Fraction(x_mid, grid), Fraction(x_rad, grid))
            logger.debug("%s reaches %d digits at N = %d", formula.name, d, n)
        if n in wanted:
            samples[n] = ApproxValue(Fraction(x_mid, grid), Fraction(x_rad, grid))
        if n % 100_000 == 0:
            logger.debug("%s scan at N = %d", formula.name, n)
        if (minimal is not None and n >= last) or n >= max_n:
            break
    if minimal is None:
        raise NoConvergence(f"{formula.name} does not reach {d} digits within {max_n} terms")
    return ScanResult(formula, d, minimal, tuple(sorted(samples.items())), target)

