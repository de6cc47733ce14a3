import csv
import io
import json
from fractions import Fraction

import pytest

from cli import discover, parse_factor, parse_series, run
from errors import DuplicateFactor, InvalidFactor, ParseError, PreconditionViolated
from exactmath import LinearFactor, Polynomial
from series import Sign, make_series, render_series


@pytest.mark.filterwarnings('error')
def test_parse_positive_series():
    s = parse_series('1/(n(4n-1)(4n-3))')
    assert s.sign is Sign.POSITIVE
    assert s.numerator == Polynomial((1,))
    assert s.factors == (LinearFactor(1, 0), LinearFactor(4, -1), LinearFactor(4, -3))


def test_parse_alternating_series():
    s = parse_series('alt: 1/(2n-1)')
    assert s == make_series(Sign.ALTERNATING, 1, [(2, -1)])


def test_parse_tolerates_spacing_and_stars():
    assert parse_series(' 1 / ( n * (4n - 1) * (4n-3) ) ') == parse_series('1/(n(4n-1)(4n-3))')


def test_parse_folds_constant_factors_into_scale():
    s = parse_series('1/(2(2n-1)(2n+1))')
    assert s.scale == Fraction(1, 2)
    assert s.factors == (LinearFactor(2, -1), LinearFactor(2, 1))
    with pytest.raises(ParseError):
        parse_series('1/(0(2n-1)(2n+1))')


def test_parse_scale_and_polynomial_numerator():
    s = parse_series('1/2*(8n^2-3n+1)/(n(2n-1)(4n+1)(4n-1))')
    assert s.scale == Fraction(1, 2)
    assert s.numerator == Polynomial((1, -3, 8))
    assert parse_series(render_series(s)) == s


@pytest.mark.filterwarnings('error')
def test_parse_errors():
    with pytest.raises(DuplicateFactor):
        parse_series('1/(n n)')
    with pytest.raises(InvalidFactor):
        parse_series('1/(n(n-1))')
    with pytest.raises(ParseError) as excinfo:
        parse_series('1/(n(4n-1)')
    assert excinfo.value.position is not None
    with pytest.raises(ParseError):
        parse_series('1/(n x)')


@pytest.mark.filterwarnings('error')
def test_parse_factor():
    assert parse_factor('4n+1') == LinearFactor(4, 1)
    assert parse_factor('n') == LinearFactor(1, 0)
    with pytest.raises(ParseError):
        parse_factor('7')


def test_discover_default_pool():
    pool = [parse_factor(t) for t in 'n,2n-1,4n-3,4n-1,4n+1'.split(',')]
    skipped = []
    records = discover(pool, 2, 5, skipped=skipped)
    assert len(records) == 26
    assert skipped == []
    by_name = {r.name: r.claimed for r in records}
    assert str(by_name['1/(n(4n-3)(4n-1))']) == 'pi/3 - ln2'


def test_discover_reports_unsupported_subsets():
    skipped = []
    records = discover([LinearFactor(1, 0), LinearFactor(8, -1), LinearFactor(2, -1)], 2, 2, skipped=skipped)
    assert [r.name for r in records] == ['1/(n(2n-1))']
    assert len(skipped) == 2


def test_discover_size_bounds():
    with pytest.raises(PreconditionViolated):
        discover([LinearFactor(1, 0), LinearFactor(2, -1)], 1, 2)


def test_closed_form_command(capsys):
    assert run(['closed-form', '1/(n(4n-1)(4n-3))']) == 0
    assert capsys.readouterr().out.strip() == 'pi/3 - ln2'


def test_closed_form_command_json(capsys):
    assert run(['closed-form', '--json', 'alt: 1/(2n-1)']) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['value'] == 'pi/4'
    assert payload['vector'] == {'one': '0', 'pi': '1/4', 'ln2': '0', 'gamma': '0'}


def test_sum_command(capsys):
    assert run(['sum', '1/((4n+1)(4n-1)(4n-3))', '-N', '2', '--digits', '6']) == 0
    out = capsys.readouterr().out.split()
    assert out == ['22/315', '0.069841']


def test_eval_command(capsys):
    assert run(['eval', '1/(n(4n-1)(4n-3))', '--digits', '10']) == 0
    out = capsys.readouterr().out
    assert out.startswith('0.3540503706')


def test_verify_command(capsys):
    assert run(['verify', '--digits', '20', '--jobs', '2']) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == '19 checks, 19 passed, 0 failed'


def test_verify_command_fails_on_bad_ledger(capsys, tmp_path):
    document = {'series': [{'name': 'S1', 'sign': 'positive', 'numerator': [1], 'factors': [[1, 0], [4, -1], [4, -3]],
                            'claimed': {'one': '1', 'pi': '1/3', 'ln2': '-1', 'gamma': '0'}}]}
    path = tmp_path / 'ledger.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    assert run(['verify', '--ledger', str(path), '--no-numeric']) == 1
    assert capsys.readouterr().out.startswith('FAIL')


def test_benchmark_csv(capsys):
    assert run(['benchmark', '--formula', 'pi_s19', '--digits', '5', '--checkpoints', '9,217', '--csv']) == 0
    captured = capsys.readouterr()
    rows = list(csv.DictReader(io.StringIO(captured.out)))
    assert list(rows[0]) == ['N', 'approx', 'radius', 'abs_error_bound', 'accuracy_digits']
    assert [row['N'] for row in rows] == ['9', '217']
    assert int(rows[1]['accuracy_digits']) >= 5
    assert 'minimal N' in captured.err


def test_benchmark_accepts_formula_alias(capsys):
    assert run(['benchmark', '--formula', 'eq14', '--digits', '5', '--checkpoints', '9,217', '--csv']) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [row['N'] for row in rows] == ['9', '217']
    assert abs(Fraction(rows[0]['approx']) - Fraction('3.140133')) < Fraction(1, 10 ** 6)
    assert abs(Fraction(rows[1]['approx']) - Fraction('3.141590')) < Fraction(1, 10 ** 6)


def test_discover_command(capsys):
    assert run(['discover']) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1] == '26 records, 0 unsupported'
    assert any(line.endswith('[S1]') for line in out)


def test_usage_errors_exit_2(capsys):
    assert run(['closed-form', '1/(n n)']) == 2
    assert 'error:' in capsys.readouterr().err
    assert run(['benchmark', '--formula', 'eq99']) == 2
    assert run(['frobnicate']) == 2
    assert run(['discover', '--min-size', '1']) == 2


def test_missing_ledger_file_exits_2(capsys):
    assert run(['verify', '--ledger', '/nonexistent/ledger.json', '--no-numeric']) == 2
    assert 'cannot read ledger' in capsys.readouterr().err
