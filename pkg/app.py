import logging
import os

from flask import Flask, jsonify

from api import series_bp
from init_databases import get_persistent_disk_path, initialize_databases_on_startup

logging.basicConfig(level=logging.INFO, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
logger = logging.getLogger(__name__)


def create_app(overrides=None):
    app = Flask(__name__)
    app.secret_key = os.environ.get('SECRET_KEY', 'dev-secret-key')
    app.config['SERIES_LEDGER_PATH'] = os.environ.get('SERIES_LEDGER_PATH', 'builtin')
    app.config['RESULTS_DB'] = os.path.join(get_persistent_disk_path(), 'series_results.db')
    if overrides:
        app.config.update(overrides)

    # results tables must exist before the first benchmark request
    initialize_databases_on_startup(app.config['RESULTS_DB'])
    app.register_blueprint(series_bp)

    @app.route('/')
    def index():
        return jsonify({'success': True, 'endpoints': sorted(
            rule.rule for rule in app.url_map.iter_rules() if rule.rule.startswith('/api'))})

    logger.debug("registered endpoints: %s", [rule.rule for rule in app.url_map.iter_rules()])
    return app


if __name__ == '__main__':
    create_app().run(host='0.0.0.0', port=int(os.environ.get('PORT', 5000)))
