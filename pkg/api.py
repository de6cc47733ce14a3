from functools import wraps
import logging

from flask import Blueprint, current_app, jsonify, request

import config
from cli import discover, parse_factor, parse_series
from closedform import closed_form, cv_render
from errors import PreconditionViolated, SeriesError
from exactmath import render_rational
from init_databases import list_benchmark_runs, record_benchmark_run
from ledger import accuracy_scan, load_ledger, verify_all
from series import ApproxValue, evaluate_detailed, format_decimal, format_radius, partial_sum_exact, render_series

logger = logging.getLogger(__name__)

series_bp = Blueprint('series_bp', __name__, url_prefix='/api')


def _vector(v):
    return {'one': render_rational(v.q1), 'pi': render_rational(v.qpi),
            'ln2': render_rational(v.qln2), 'gamma': render_rational(v.qgamma)}


def _ledger():
    return load_ledger(current_app.config.get('SERIES_LEDGER_PATH', 'builtin'))


def _payload():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise PreconditionViolated("No data received")
    return data


def _field(data, name, kind=str, default=None):
    if name not in data:
        if default is None:
            raise PreconditionViolated(f"Missing required field: {name}")
        return default
    try:
        return kind(data[name])
    except (TypeError, ValueError):
        raise PreconditionViolated(f"Field {name} must be {kind.__name__}")


def series_endpoint(view):
    """Answer SeriesError with {"success": false, "message"} and HTTP 400"""
    @wraps(view)
    def wrapper(*args, **kwargs):
        try:
            return view(*args, **kwargs)
        except SeriesError as e:
            logger.debug("%s rejected: %s", request.path, e)
            return jsonify({'success': False, 'message': str(e)}), 400
    return wrapper


@series_bp.route('/ledger')
@series_endpoint
def ledger_overview():
    ledger = _ledger()
    return jsonify({
        'success': True,
        'identities': [{'name': r.name, 'series': render_series(r.series), 'claimed': cv_render(r.claimed),
                        'source': r.source} for r in ledger.identities],
        'rules': [{'rule': rule.render(), 'source': rule.source} for rule in ledger.rules],
        'formulas': [{'name': f.name, 'r0': render_rational(f.r0), 'r1': render_rational(f.r1),
                      'series': f.series_name, 'target': cv_render(f.target_constant), 'source': f.source,
                      'aliases': list(f.aliases)}
                     for f in ledger.formulas],
    })


@series_bp.route('/closed-form', methods=['POST'])
@series_endpoint
def closed_form_route():
    s = parse_series(_field(_payload(), 'series'))
    v = closed_form(s)
    return jsonify({'success': True, 'series': render_series(s), 'value': cv_render(v), 'vector': _vector(v)})


@series_bp.route('/eval', methods=['POST'])
@series_endpoint
def eval_route():
    data = _payload()
    s = parse_series(_field(data, 'series'))
    digits = _field(data, 'digits', int, config.DEFAULT_DIGITS)
    result = evaluate_detailed(s, digits)
    return jsonify({
        'success': True,
        'series': render_series(s),
        'digits': digits,
        'value': format_decimal(result.value, digits),
        'radius': format_radius(result.value.radius),
        'terms': result.terms,
        'method': result.method,
    })


@series_bp.route('/sum', methods=['POST'])
@series_endpoint
def sum_route():
    data = _payload()
    s = parse_series(_field(data, 'series'))
    n = _field(data, 'n', int)
    total = partial_sum_exact(s, n)
    return jsonify({'success': True, 'series': render_series(s), 'N': n, 'exact': render_rational(total),
                    'decimal': format_decimal(ApproxValue(total), config.DEFAULT_DIGITS)})


@series_bp.route('/verify')
@series_endpoint
def verify_route():
    digits = request.args.get('digits', config.NUMERIC_VERIFY_DIGITS, type=int)
    reports = verify_all(_ledger(), digits=digits)
    return jsonify({'success': all(r.passed for r in reports), 'reports': [r.as_dict() for r in reports]})


@series_bp.route('/benchmark', methods=['POST'])
@series_endpoint
def benchmark_route():
    data = _payload()
    ledger = _ledger()
    formula = ledger.formula(_field(data, 'formula'))
    digits = _field(data, 'digits', int, 5)
    max_terms = _field(data, 'max_terms', int, config.DEFAULT_MAX_TERMS)
    checkpoints = data.get('checkpoints') or []
    if not isinstance(checkpoints, list) or not all(isinstance(c, int) for c in checkpoints):
        raise PreconditionViolated("checkpoints must be a list of integers")
    result = accuracy_scan(formula, digits, max_terms, ledger, checkpoints)
    rows = result.rows()
    if checkpoints:
        rows = [row for row in rows if row['N'] in set(checkpoints)]
    run_id = record_benchmark_run(current_app.config['RESULTS_DB'], formula.name, digits, result.minimal_n, rows)
    return jsonify({'success': True, 'run_id': run_id, 'formula': formula.name, 'digits': digits,
                    'minimal_n': result.minimal_n, 'rows': rows})


@series_bp.route('/benchmarks')
@series_endpoint
def benchmarks_route():
    limit = request.args.get('limit', 20, type=int)
    return jsonify({'success': True, 'runs': list_benchmark_runs(current_app.config['RESULTS_DB'], limit)})


@series_bp.route('/discover', methods=['POST'])
@series_endpoint
def discover_route():
    data = _payload()
    pool_text = _field(data, 'pool', str, config.DEFAULT_DISCOVER_POOL)
    pool = [parse_factor(text.strip()) for text in pool_text.split(',')]
    min_size = _field(data, 'min_size', int, 2)
    max_size = _field(data, 'max_size', int, len(pool))
    skipped = []
    records = discover(pool, min_size, max_size, skipped=skipped)
    return jsonify({
        'success': True,
        'records': [{'series': r.name, 'value': cv_render(r.claimed), 'vector': _vector(r.claimed)} for r in records],
        'unsupported': [{'series': render_series(s), 'message': str(e)} for s, e in skipped],
    })
