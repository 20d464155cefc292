"""
Django settings for the holevo project.

The project has no web surface: it hosts the ``erasure`` app, whose
management commands are the command-line front end of the library.

Every value can be overridden from the environment (or a ``.env`` file).
"""
import os
from pathlib import Path
from dotenv import load_dotenv


load_dotenv()


BASE_DIR = Path(__file__).resolve().parent.parent


# Nothing is signed or served, a development key is enough.
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'holevo-erasure-development-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'erasure',
]

# No persistent state: ensembles live in JSON files.
DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

USE_I18N = False

FIXTURES_DIR = BASE_DIR / 'fixtures'


# Library configuration, read through erasure.conf.erasure_settings
ERASURE_CHI = {
    'DEFAULT_SEED': int(os.environ.get('ERASURE_CHI_SEED', '0')),
    'DEFAULT_DIMS': [2, 3, 4],
    'DEFAULT_LETTERS': 3,
    'DEFAULT_TRIALS': 1000,
    'DEFAULT_TOL': 1e-9,
    'EPSILON_MIX': 1e-10,
    'SIGNIFICANT_DIGITS': 12,
    'MAX_ITER': 10000,
}


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'erasure': {
            'handlers': ['console'],
            'level': os.environ.get('ERASURE_CHI_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
