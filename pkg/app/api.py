"""Read-only Flask API over the lab functions."""

import logging
import os
import re
import sys

from flask import Flask, jsonify, request

from app import __version__
from app.catalog import run_catalog
from app.config import Config
from app.factorize import factor, verify
from app.families import build, realize
from app.kernel import ClassificationError, MonoidError, NotEnumerableError, SpecError
from app.lab import classify, count_squarefree, table_consistency, witness_for_count
from app.predicates import Scheme
from app.profile import monoid_profile
from app.report import verdict_data

# Configure logging
log_level_name = os.environ.get('LOG_LEVEL', 'INFO').upper()
log_level = getattr(logging, log_level_name, logging.INFO)

logging.basicConfig(
    level=log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(sys.stdout)
    ]
)

logger = logging.getLogger(__name__)

# Suppress werkzeug logging for /health endpoint
werkzeug_logger = logging.getLogger('werkzeug')


class HealthCheckFilter(logging.Filter):
    def filter(self, record):
        return '/health' not in record.getMessage()


werkzeug_logger.addFilter(HealthCheckFilter())

app = Flask(__name__)
config = Config()

SCHEMES = frozenset(s.value for s in Scheme)
MAX_SPEC_LENGTH = 500


class ValidationError(ValueError):
    """Raised for request parameters that fail validation."""


# JSON error handlers
@app.errorhandler(400)
def bad_request(error):
    """Return JSON for 400 errors instead of HTML."""
    return jsonify({
        'message': 'The request could not be understood'
    }), 400


@app.errorhandler(404)
def not_found(error):
    """Return JSON for 404 errors instead of HTML."""
    return jsonify({
        'message': 'The requested endpoint does not exist'
    }), 404


@app.errorhandler(405)
def method_not_allowed(error):
    """Return JSON for 405 errors instead of HTML."""
    return jsonify({
        'message': 'The method is not allowed for the requested endpoint'
    }), 405


@app.errorhandler(500)
def internal_error(error):
    """Return JSON for 500 errors instead of HTML."""
    return jsonify({
        'error': 'Internal Server Error',
        'message': 'An unexpected error occurred'
    }), 500


@app.errorhandler(ValidationError)
def invalid_parameter(error):
    return jsonify({'message': str(error)}), 400


@app.errorhandler(SpecError)
def invalid_spec(error):
    return jsonify({'message': str(error), 'field': error.field}), 400


@app.errorhandler(NotEnumerableError)
def not_enumerable(error):
    return jsonify({'message': str(error)}), 400


@app.errorhandler(ClassificationError)
def classification_failed(error):
    logger.error(f"Classification failed: {error}")
    return jsonify({'message': str(error)}), 422


# Validation


def validate_bound(value: str | None, default: int) -> int:
    """
    Validate a norm bound - digits only, at most the configured maximum.

    Args:
        value: Raw query parameter (None means the default)
        default: Bound used when the parameter is absent

    Returns:
        The bound as an integer
    """
    if value is None:
        return min(default, config.max_api_bound)
    if not re.fullmatch(r'[0-9]{1,4}', value):
        raise ValidationError('bound must be a non-negative integer')
    bound = int(value)
    if bound > config.max_api_bound:
        raise ValidationError(f"bound must be at most {config.max_api_bound}")
    return bound


def validate_scheme(value: str | None) -> str:
    if value not in SCHEMES:
        raise ValidationError(f"scheme must be one of {', '.join(sorted(SCHEMES))}")
    return value


def require_spec() -> str:
    text = request.args.get('spec', '')
    if not text or len(text) > MAX_SPEC_LENGTH:
        raise ValidationError('spec is required and must be short')
    return text


# Routes


@app.route('/health', methods=['GET'])
def health():
    """Health check endpoint."""
    return jsonify({
        'status': 'ok',
        'version': __version__
    }), 200


@app.route('/analyze', methods=['GET'])
def analyze():
    """Profile and scheme verdicts of a monoid."""
    spec = build(require_spec(), config.family_defaults())
    bound = validate_bound(request.args.get('bound'), config.element_bound)
    m = realize(spec)
    profile = monoid_profile(m, bound, node_budget=config.node_budget)
    return jsonify({
        'spec': spec.key,
        'bound': bound,
        'properties': {name: verdict_data(m, v) for name, v in profile.verdicts.items()},
        'conflicts': profile.conflicts,
    }), 200


@app.route('/classify', methods=['GET'])
def classify_route():
    spec = build(require_spec(), config.family_defaults())
    bound = validate_bound(request.args.get('bound'), config.element_bound)
    row = classify(spec, bound, node_budget=config.node_budget)
    return jsonify({
        'spec': row.key,
        'accp_atm': sorted(row.accp_atm),
        'gcd_decomp': sorted(row.gcd_decomp),
        'schemes': row.signs(),
        'table': verdict_data(None, table_consistency([row])),
    }), 200


@app.route('/count', methods=['GET'])
def count():
    """Square-free elements of a spec, or of the monoid built for a target count."""
    witness = request.args.get('witness')
    if witness is not None:
        if not re.fullmatch(r'[0-9]{1,3}', witness) or int(witness) < 1:
            raise ValidationError('witness must be a positive integer below 1000')
        spec = witness_for_count(int(witness))
    else:
        spec = build(require_spec(), config.family_defaults())
    bound = validate_bound(request.args.get('bound'), config.element_bound)
    m = realize(spec)
    result = count_squarefree(spec, bound)
    return jsonify({
        'spec': spec.key,
        'count': result.count,
        'exact': result.exact,
        'members': [m.render(a) for a in result.members],
    }), 200


@app.route('/factor', methods=['GET'])
def factor_route():
    spec = build(require_spec(), config.family_defaults())
    scheme = validate_scheme(request.args.get('scheme'))
    m = realize(spec)
    text = request.args.get('element', '')
    if not text or len(text) > MAX_SPEC_LENGTH:
        raise ValidationError('element is required')
    a = m.parse(text)
    if m.norm(a) > config.max_api_bound:
        raise ValidationError(f"element norm must be at most {config.max_api_bound}")
    verdict = factor(m, a, scheme, node_budget=config.node_budget)
    body = {'spec': spec.key, 'element': m.render(a), 'scheme': scheme,
            'factorization': verdict_data(m, verdict)}
    if verdict.holds:
        body['verification'] = verdict_data(m, verify(m, a, verdict.witness[0]))
    return jsonify(body), 200


@app.route('/catalog', methods=['GET'])
def catalog():
    run = run_catalog(config.catalog_path)
    return jsonify({
        'passed': run.passed,
        'entries': [{'id': o.id, 'source': o.source, 'passed': o.passed, 'detail': o.detail}
                    for o in run.outcomes],
    }), 200


@app.errorhandler(MonoidError)
def monoid_error(error):
    logger.warning(f"Request failed: {error}")
    return jsonify({'message': str(error)}), 400


logger.info("sqfree-lab API initialized")


def main():
    """Main entry point for direct execution (development only)."""
    host = config.server_host
    port = config.server_port

    logger.info(f"Starting sqfree-lab API on {host}:{port}")
    app.run(host=host, port=port, debug=False)


if __name__ == '__main__':
    main()
