# cli.py - command line surface: series grammar, discover, and the subcommands
#
#   python cli.py closed-form "1/(n(4n-1)(4n-3))"
#   python cli.py verify --ledger builtin
#   python cli.py benchmark --formula pi_s19 --digits 5 --checkpoints 9,217 --csv
import argparse
import csv
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from pyparsing import Group, OneOrMore, Opt, ParseException, Regex, StringEnd, Suppress, ZeroOrMore, one_of

import config
from closedform import closed_form, cv_render
from errors import NoConvergence, ParseError, PreconditionViolated, SeriesError, UnsupportedConstantBasis
from exactmath import LinearFactor, Polynomial, render_rational
from ledger import IdentityRecord, accuracy_scan, load_ledger, verify_all
from series import (
    ApproxValue,
    Sign,
    evaluate_detailed,
    format_decimal,
    format_radius,
    make_series,
    partial_sum_exact,
    render_series,
)

logger = logging.getLogger(__name__)


# --------------------
# SERIES GRAMMAR
# --------------------
#   series  := ["alt:"] [rational "*"] poly "/" "(" factor { ["*"] factor } ")"
#   factor  := "(" term ")" | term
#   term    := [int] "n" [("+"|"-") int] | int
#   poly    := int | "(" monomial { ("+"|"-") monomial } ")"

_LINEAR_RE = re.compile(r'(\d+)?\s*n(?:\s*([+-])\s*(\d+))?')
_MONOMIAL_RE = re.compile(r'(\d+)?\s*n(?:\s*\^\s*(\d+))?')


@dataclass(frozen=True)
class _Linear:
    a: int
    b: int


@dataclass(frozen=True)
class _Const:
    value: int


@dataclass(frozen=True)
class _Monomial:
    coef: int
    power: int


def _linear_action(tokens):
    a, sign, b = _LINEAR_RE.fullmatch(tokens[0]).groups()
    return _Linear(int(a or 1), int(sign + b) if b else 0)


def _monomial_action(tokens):
    coef, power = _MONOMIAL_RE.fullmatch(tokens[0]).groups()
    return _Monomial(int(coef or 1), int(power or 1))


def _polynomial_action(tokens):
    sign = '+'
    poly = Polynomial(())
    for tok in tokens[0]:
        if isinstance(tok, str):
            sign = tok
            continue
        coef, power = (tok.coef, tok.power) if isinstance(tok, _Monomial) else (tok.value, 0)
        poly = poly + Polynomial(tuple([0] * power + [coef if sign == '+' else -coef]))
        sign = '+'
    return poly


_LINEAR = Regex(_LINEAR_RE.pattern).set_parse_action(_linear_action)
_CONST = Regex(r'\d+').set_parse_action(lambda t: _Const(int(t[0])))
_TERM = _LINEAR | _CONST
_FACTOR = (Suppress('(') + _TERM + Suppress(')')) | _TERM
_DENOMINATOR = Suppress('(') + Group(OneOrMore(Opt(Suppress('*')) + _FACTOR)) + Suppress(')')

_MONOMIAL = Regex(_MONOMIAL_RE.pattern).set_parse_action(_monomial_action) | _CONST
_POLY = (Suppress('(') + Group(Opt(one_of('+ -')) + _MONOMIAL + ZeroOrMore(one_of('+ -') + _MONOMIAL))
         + Suppress(')')).set_parse_action(_polynomial_action)
_NUMERATOR = _POLY | Regex(r'[+-]?\s*\d+').set_parse_action(
    lambda t: Polynomial.constant(int(t[0].replace(' ', ''))))
_RATIONAL = Regex(r'[+-]?\s*\d+(?:\s*/\s*\d+)?').set_parse_action(lambda t: Fraction(t[0].replace(' ', '')))
_ALT = Regex(r'alt\s*:')

_SERIES = Opt(_ALT) + Opt(_RATIONAL + Suppress('*')) + _NUMERATOR + Suppress('/') + _DENOMINATOR + StringEnd()


def parse_series(text):
    try:
        parsed = _SERIES.parse_string(text, parse_all=True)
    except ParseException as e:
        raise ParseError(f"cannot parse series {text!r}: {e.msg}", e.loc)
    sign, scale, numerator, denominator = Sign.POSITIVE, Fraction(1), None, ()
    for tok in parsed:
        if isinstance(tok, str):
            sign = Sign.ALTERNATING
        elif isinstance(tok, Fraction):
            scale = tok
        elif isinstance(tok, Polynomial):
            numerator = tok
        else:
            denominator = tok
    factors = []
    for tok in denominator:
        if isinstance(tok, _Const):
            if tok.value == 0:
                raise ParseError(f"zero factor in denominator of {text!r}")
            scale /= tok.value
        else:
            factors.append(LinearFactor(tok.a, tok.b))
    return make_series(sign, numerator, factors, scale)


def parse_factor(text):
    try:
        tok = _FACTOR.parse_string(text, parse_all=True)[0]
    except ParseException as e:
        raise ParseError(f"cannot parse factor {text!r}: {e.msg}", e.loc)
    if not isinstance(tok, _Linear):
        raise ParseError(f"factor {text!r} does not depend on n")
    return LinearFactor(tok.a, tok.b)


# --------------------
# DISCOVER
# --------------------


def discover(pool, min_size, max_size, skipped=None, jobs=1):
    """Closed forms of sum 1/prod(F) for every subset F of the pool with
    min_size <= |F| <= max_size, subsets in lexicographic factor order.

    Subsets outside the constant basis are appended to `skipped` as
    (series, error) pairs instead of failing the run.
    """
    pool = sorted(pool)
    if not 2 <= min_size <= max_size <= len(pool):
        raise PreconditionViolated(f"need 2 <= min_size <= max_size <= {len(pool)}, got {min_size}..{max_size}")
    subsets = [combo for k in range(min_size, max_size + 1) for combo in combinations(pool, k)]

    def solve(combo):
        s = make_series(Sign.POSITIVE, 1, combo)
        try:
            return s, closed_form(s), None
        except UnsupportedConstantBasis as e:
            return s, None, e

    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as executor:
        solved = list(executor.map(solve, subsets))
    records = []
    for s, vector, error in solved:
        if error is not None:
            logger.warning("skipping %s: %s", render_series(s), error)
            if skipped is not None:
                skipped.append((s, error))
            continue
        records.append(IdentityRecord(render_series(s), s, vector, 'discover'))
    return records


# --------------------
# SUBCOMMANDS
# --------------------


def _vector_json(v):
    return {'one': render_rational(v.q1), 'pi': render_rational(v.qpi),
            'ln2': render_rational(v.qln2), 'gamma': render_rational(v.qgamma)}


def _emit_json(payload):
    print(json.dumps(payload, indent=2))


def cmd_eval(args):
    s = parse_series(args.series)
    result = evaluate_detailed(s, args.digits)
    if args.json:
        _emit_json({'series': render_series(s), 'digits': args.digits,
                    'value': format_decimal(result.value, args.digits),
                    'radius': format_radius(result.value.radius),
                    'terms': result.terms, 'method': result.method})
    else:
        print(f"{format_decimal(result.value, args.digits)} +/- {format_radius(result.value.radius)}")
    return 0


def cmd_sum(args):
    s = parse_series(args.series)
    total = partial_sum_exact(s, args.N, cap=args.max_terms)
    decimal = format_decimal(ApproxValue(total), args.digits)
    if args.json:
        _emit_json({'series': render_series(s), 'N': args.N, 'exact': render_rational(total), 'decimal': decimal})
    else:
        print(render_rational(total))
        print(decimal)
    return 0


def cmd_closed_form(args):
    s = parse_series(args.series)
    v = closed_form(s)
    if args.json:
        _emit_json({'series': render_series(s), 'value': cv_render(v), 'vector': _vector_json(v)})
    else:
        print(cv_render(v))
    return 0


def cmd_verify(args):
    ledger = load_ledger(args.ledger)
    reports = verify_all(ledger, digits=args.digits, numeric=not args.no_numeric, jobs=args.jobs)
    passed = all(r.passed for r in reports)
    if args.json:
        _emit_json({'passed': passed, 'reports': [r.as_dict() for r in reports]})
    else:
        for r in reports:
            print(r.line())
        fails = sum(not r.passed for r in reports)
        print(f"{len(reports)} checks, {len(reports) - fails} passed, {fails} failed")
    return 0 if passed else 1


def _checkpoints(text):
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"checkpoints must be comma separated integers, got {text!r}")


CSV_HEADER = ['N', 'approx', 'radius', 'abs_error_bound', 'accuracy_digits']


def cmd_benchmark(args):
    ledger = load_ledger(args.ledger)
    formula = ledger.formula(args.formula)
    result = accuracy_scan(formula, args.digits, args.max_terms, ledger, args.checkpoints)
    rows = result.rows()
    if args.checkpoints:
        rows = [row for row in rows if row['N'] in set(args.checkpoints)]
    if args.csv:
        print(f"# {formula.name}: minimal N for {args.digits} digits is {result.minimal_n}", file=sys.stderr)
        writer = csv.DictWriter(sys.stdout, fieldnames=CSV_HEADER, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
    elif args.json:
        _emit_json({'formula': formula.name, 'digits': args.digits, 'minimal_n': result.minimal_n, 'rows': rows})
    else:
        print(f"{formula.name} ({formula.source}): minimal N for {args.digits} digits = {result.minimal_n}")
        for row in rows:
            print(f"  N={row['N']:<9} {row['approx']}  +/- {row['radius']}  "
                  f"|error| <= {row['abs_error_bound']}  ({row['accuracy_digits']} digits)")
    return 0


def cmd_discover(args):
    pool = [parse_factor(text.strip()) for text in args.pool.split(',')]
    skipped = []
    records = discover(pool, args.min_size, args.max_size, skipped=skipped, jobs=args.jobs)
    known = {}
    if args.ledger:
        for record in load_ledger(args.ledger).identities:
            if not record.series.is_alternating:
                known[(frozenset(record.series.factors), record.series.numerator, record.series.scale)] = record
    rows = []
    for record in records:
        s = record.series
        match = known.get((frozenset(s.factors), s.numerator, s.scale))
        rows.append((record, match.name if match is not None and match.claimed == record.claimed else None))
    if args.json:
        _emit_json({'records': [{'series': r.name, 'value': cv_render(r.claimed), 'vector': _vector_json(r.claimed),
                                 'ledger': name} for r, name in rows],
                    'unsupported': [{'series': render_series(s), 'error': str(e)} for s, e in skipped]})
    else:
        for record, name in rows:
            tag = f"  [{name}]" if name else ''
            print(f"{record.name}  =  {cv_render(record.claimed)}{tag}")
        for s, e in skipped:
            print(f"unsupported: {render_series(s)} ({e})")
        print(f"{len(records)} records, {len(skipped)} unsupported")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog='cli.py', description="Exact evaluation, closed forms and "
                                     "benchmarks for series of rational functions with linear factors")
    parser.add_argument('-v', '--verbose', action='store_true', help="debug logging on stderr")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', help="rigorous decimal enclosure")
    p.add_argument('series')
    p.add_argument('--digits', type=int, default=config.DEFAULT_DIGITS)
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('sum', help="exact partial sum")
    p.add_argument('series')
    p.add_argument('-N', type=int, required=True)
    p.add_argument('--digits', type=int, default=config.DEFAULT_DIGITS)
    p.add_argument('--max-terms', type=int, default=config.EXACT_SUM_CAP)
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser('closed-form', help="exact value over {1, pi, ln2, gamma}")
    p.add_argument('series')
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_closed_form)

    p = sub.add_parser('verify', help="check every identity and rule of a ledger")
    p.add_argument('--ledger', default='builtin')
    p.add_argument('--digits', type=int, default=config.NUMERIC_VERIFY_DIGITS)
    p.add_argument('--no-numeric', action='store_true')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('benchmark', help="terms needed for d correct decimals")
    p.add_argument('--formula', required=True)
    p.add_argument('--digits', type=int, default=5)
    p.add_argument('--checkpoints', type=_checkpoints, default=())
    p.add_argument('--max-terms', type=int, default=config.DEFAULT_MAX_TERMS)
    p.add_argument('--ledger', default='builtin')
    out = p.add_mutually_exclusive_group()
    out.add_argument('--csv', action='store_true')
    out.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_benchmark)

    p = sub.add_parser('discover', help="closed forms for every subset of a factor pool")
    p.add_argument('--pool', default=config.DEFAULT_DISCOVER_POOL)
    p.add_argument('--min-size', type=int, default=2)
    p.add_argument('--max-size', type=int, default=None)
    p.add_argument('--ledger', default='builtin')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--json', action='store_true')
    p.set_defaults(handler=cmd_discover)
    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    if getattr(args, 'max_size', 0) is None:
        args.max_size = len(args.pool.split(','))
    try:
        return args.handler(args)
    except NoConvergence as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SeriesError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
