import pytest

from app import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app({'TESTING': True, 'RESULTS_DB': str(tmp_path / 'results.db')})
    return app.test_client()


def test_index_lists_api_routes(client):
    data = client.get('/').get_json()
    assert data['success']
    assert '/api/closed-form' in data['endpoints']


def test_ledger_overview(client):
    data = client.get('/api/ledger').get_json()
    assert data['success']
    assert len(data['identities']) == 13
    assert data['identities'][0]['name'] == 'LN2'
    assert 'S_d = 8*S_c - S_a' in [r['rule'] for r in data['rules']]
    assert data['formulas'][0]['aliases'] == ['eq14']


def test_closed_form(client):
    response = client.post('/api/closed-form', json={'series': '1/(n(4n-1)(4n-3))'})
    assert response.status_code == 200
    data = response.get_json()
    assert data['value'] == 'pi/3 - ln2'
    assert data['vector']['ln2'] == '-1'


def test_eval_and_sum(client):
    data = client.post('/api/eval', json={'series': '1/(n(4n-1)(4n-3))', 'digits': 10}).get_json()
    assert data['success']
    assert data['value'] == '0.3540503706'
    data = client.post('/api/sum', json={'series': '1/((4n+1)(4n-1)(4n-3))', 'n': 2}).get_json()
    assert data['exact'] == '22/315'


def test_errors_answer_400(client):
    response = client.post('/api/closed-form', json={'series': '1/(n n)'})
    assert response.status_code == 400
    assert response.get_json() == {'success': False, 'message': response.get_json()['message']}
    assert 'root' in response.get_json()['message']
    response = client.post('/api/closed-form', data='not json')
    assert response.status_code == 400
    assert response.get_json()['message'] == 'No data received'
    response = client.post('/api/sum', json={'series': '1/(n(n+1))'})
    assert response.status_code == 400
    assert 'n' in response.get_json()['message']


def test_verify(client):
    data = client.get('/api/verify?digits=20').get_json()
    assert data['success']
    assert len(data['reports']) == 19


def test_benchmark_is_stored(client):
    data = client.post('/api/benchmark', json={'formula': 'pi_s19', 'digits': 2, 'checkpoints': [9]}).get_json()
    assert data['success']
    assert [row['N'] for row in data['rows']] == [9]
    runs = client.get('/api/benchmarks').get_json()['runs']
    assert runs[0]['id'] == data['run_id']
    assert runs[0]['formula'] == 'pi_s19'
    assert runs[0]['rows'][0]['N'] == 9


def test_benchmark_rejects_bad_checkpoints(client):
    response = client.post('/api/benchmark', json={'formula': 'pi_s19', 'checkpoints': 'nine'})
    assert response.status_code == 400


def test_discover(client):
    data = client.post('/api/discover', json={'pool': 'n,2n-1,4n-3', 'min_size': 2}).get_json()
    assert data['success']
    assert len(data['records']) == 4
    assert data['unsupported'] == []


def test_missing_ledger_file_answers_400(tmp_path):
    app = create_app({'TESTING': True, 'RESULTS_DB': str(tmp_path / 'results.db'),
                      'SERIES_LEDGER_PATH': str(tmp_path / 'missing.json')})
    response = app.test_client().get('/api/ledger')
    assert response.status_code == 400
    assert 'cannot read ledger' in response.get_json()['message']
