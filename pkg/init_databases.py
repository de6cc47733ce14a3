import datetime
import logging
import os
import sqlite3

logger = logging.getLogger(__name__)


def get_persistent_disk_path():
    """Get appropriate persistent disk path based on environment"""
    if os.path.exists('/opt/render'):
        # Production environment (Render)
        return os.environ.get('RENDER_PERSISTENT_DISK_PATH', '/opt/render/project/data')
    # Local development environment
    return os.environ.get('RENDER_PERSISTENT_DISK_PATH',
                          os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data'))


def default_results_db():
    return os.path.join(get_persistent_disk_path(), 'series_results.db')


def get_results_schema():
    return {
        'benchmark_runs': '''
            CREATE TABLE IF NOT EXISTS benchmark_runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                formula TEXT NOT NULL,
                digits INTEGER NOT NULL,
                minimal_n INTEGER NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        ''',
        'benchmark_rows': '''
            CREATE TABLE IF NOT EXISTS benchmark_rows (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                run_id INTEGER NOT NULL,
                n INTEGER NOT NULL,
                approx TEXT NOT NULL,
                radius TEXT NOT NULL,
                abs_error_bound TEXT NOT NULL,
                accuracy_digits INTEGER,
                FOREIGN KEY (run_id) REFERENCES benchmark_runs (id)
            )
        ''',
    }


def get_connection(db_file):
    conn = sqlite3.connect(db_file)
    conn.row_factory = sqlite3.Row
    return conn


def initialize_databases_on_startup(db_file=None):
    """Create the results database and its tables if missing"""
    db_file = db_file or default_results_db()
    directory = os.path.dirname(os.path.abspath(db_file))
    os.makedirs(directory, exist_ok=True)
    fresh = not os.path.exists(db_file)
    logger.info("📊 %s results database at: %s", "Creating" if fresh else "Opening", db_file)

    conn = sqlite3.connect(db_file)
    try:
        for table, ddl in get_results_schema().items():
            conn.execute(ddl)
            logger.debug("table %s ready", table)
        conn.commit()
        runs = conn.execute("SELECT COUNT(*) FROM benchmark_runs").fetchone()[0]
        logger.info("✅ Results database ready, %d stored benchmark runs", runs)
    except sqlite3.Error as e:
        logger.error("❌ Database initialization error: %s", e)
        raise
    finally:
        conn.close()
    return db_file


def record_benchmark_run(db_file, formula, digits, minimal_n, rows):
    """Store one scan and its sampled rows; returns the run id"""
    conn = get_connection(db_file)
    try:
        cur = conn.execute(
            'INSERT INTO benchmark_runs (formula, digits, minimal_n, created_at) VALUES (?, ?, ?, ?)',
            (formula, digits, minimal_n, datetime.datetime.now().isoformat(timespec='seconds')),
        )
        run_id = cur.lastrowid
        conn.executemany('''
            INSERT INTO benchmark_rows (run_id, n, approx, radius, abs_error_bound, accuracy_digits)
            VALUES (?, ?, ?, ?, ?, ?)
        ''', [(run_id, row['N'], row['approx'], row['radius'], row['abs_error_bound'], row['accuracy_digits'])
              for row in rows])
        conn.commit()
    finally:
        conn.close()
    logger.debug("stored benchmark run %d for %s", run_id, formula)
    return run_id


def list_benchmark_runs(db_file, limit=20):
    """Stored runs, newest first, each with its rows"""
    conn = get_connection(db_file)
    try:
        runs = conn.execute('''
            SELECT id, formula, digits, minimal_n, created_at
            FROM benchmark_runs
            ORDER BY id DESC
            LIMIT ?
        ''', (limit,)).fetchall()
        result = []
        for run in runs:
            rows = conn.execute('''
                SELECT n, approx, radius, abs_error_bound, accuracy_digits
                FROM benchmark_rows
                WHERE run_id = ?
                ORDER BY n
            ''', (run['id'],)).fetchall()
            entry = dict(run)
            entry['rows'] = [{'N': r['n'], 'approx': r['approx'], 'radius': r['radius'],
                              'abs_error_bound': r['abs_error_bound'], 'accuracy_digits': r['accuracy_digits']}
                             for r in rows]
            result.append(entry)
    finally:
        conn.close()
    return result


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    initialize_databases_on_startup()
