"""Access to the numerical settings of the project."""
from django.conf import settings

DEFAULTS = {
    'MASS_TOLERANCE': 1e-12,
    'EQUALITY_TOLERANCE': 1e-12,
    'AUDIT_TOLERANCE': 1e-9,
    'DEFAULT_TRIALS': 200,
    'DEFAULT_SEED': 20240607,
    'MAX_UNIVERSE': 12,
    'EXHAUSTIVE_EVENT_ATOMS': 16,
    'CONCAVITY_GRID_STEP': 1e-3,
}


def risk_setting(name):
    """Return a RISK_MEASURES setting, falling back to the project default."""
    configured = getattr(settings, 'RISK_MEASURES', {})
    return configured.get(name, DEFAULTS[name])
