import sqlite3

from init_databases import (
    get_persistent_disk_path,
    get_results_schema,
    initialize_databases_on_startup,
    list_benchmark_runs,
    record_benchmark_run,
)

ROWS = [
    {'N': 9, 'approx': '3.1401330', 'radius': '1.5e-11', 'abs_error_bound': '1.5e-3', 'accuracy_digits': 2},
    {'N': 217, 'approx': '3.1415900', 'radius': '2.2e-10', 'abs_error_bound': '2.7e-6', 'accuracy_digits': 5},
]


def test_persistent_disk_path_follows_environment(monkeypatch, tmp_path):
    monkeypatch.setenv('RENDER_PERSISTENT_DISK_PATH', str(tmp_path))
    assert get_persistent_disk_path() == str(tmp_path)


def test_initialize_creates_tables(tmp_path):
    db_file = str(tmp_path / 'nested' / 'results.db')
    assert initialize_databases_on_startup(db_file) == db_file
    conn = sqlite3.connect(db_file)
    tables = {row[0] for row in conn.execute("SELECT name FROM sqlite_master WHERE type = 'table'")}
    conn.close()
    assert set(get_results_schema()) <= tables
    # second start keeps existing data
    record_benchmark_run(db_file, 'pi_s19', 5, 160, ROWS)
    initialize_databases_on_startup(db_file)
    assert len(list_benchmark_runs(db_file)) == 1


def test_runs_come_back_newest_first(tmp_path):
    db_file = initialize_databases_on_startup(str(tmp_path / 'results.db'))
    first = record_benchmark_run(db_file, 'pi_s19', 2, 9, ROWS[:1])
    second = record_benchmark_run(db_file, 'pi_og', 3, 120, ROWS)
    runs = list_benchmark_runs(db_file)
    assert [run['id'] for run in runs] == [second, first]
    assert runs[0]['rows'] == ROWS
    assert runs[1]['minimal_n'] == 9
    assert len(list_benchmark_runs(db_file, limit=1)) == 1
