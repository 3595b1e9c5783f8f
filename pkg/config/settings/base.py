"""
Base settings for the risk_measures project.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-change-this-in-production')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'rest_framework',
    'apps.core.apps.CoreConfig',
    'apps.scenarios.apps.ScenariosConfig',
    'apps.measures.apps.MeasuresConfig',
    'apps.axioms.apps.AxiomsConfig',
    'apps.theorems.apps.TheoremsConfig',
    'apps.reports.apps.ReportsConfig',
]

# Everything is evaluated in memory; nothing is persisted.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}

TOOL_VERSION = '1.0.0'

# Numerical behaviour. Not read from the environment: reports must be
# reproducible from the input file and the command flags alone.
RISK_MEASURES = {
    'MASS_TOLERANCE': 1e-12,
    'EQUALITY_TOLERANCE': 1e-12,
    'AUDIT_TOLERANCE': 1e-9,
    'DEFAULT_TRIALS': 200,
    'DEFAULT_SEED': 20240607,
    'MAX_UNIVERSE': 12,
    'EXHAUSTIVE_EVENT_ATOMS': 16,
    'CONCAVITY_GRID_STEP': 1e-3,
}

# Import logging configuration from core app
from apps.core.logging_config import get_logging_config
LOGGING = get_logging_config(BASE_DIR)
