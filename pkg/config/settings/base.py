"""
Django settings for the decay laboratory.

Shared by every environment; `development.py` and `production.py` only
override what differs. Numerical defaults live in `numerics.py`.
"""

import os
from pathlib import Path

from config.settings.numerics import *  # noqa: F401,F403

BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'lab-insecure-3c1e0f9b7d2a4e6f8a1b5c7d9e0f2a4b',
)

DEBUG = False

ALLOWED_HOSTS = []
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Application definition

INSTALLED_APPS = [
    # django contrib
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # 3rd-party apps
    'rest_framework',
    # local apps
    'core.apps.CoreConfig',
    'weights.apps.WeightsConfig',
    'certifier.apps.CertifierConfig',
    'kernel.apps.KernelConfig',
    'solver.apps.SolverConfig',
    'decaylab.apps.DecaylabConfig',
    'lab.apps.LabConfig',
]

MIDDLEWARE = []


# Database
# Run manifests are recorded in a local sqlite file next to the outputs.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('LAB_DATABASE', os.path.join(BASE_DIR, 'lab.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True


# Django REST framework is only used for config validation

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
}


# Outputs

LAB_OUTPUT_DIR = os.environ.get('LAB_OUTPUT_DIR', os.path.join(BASE_DIR, 'runs'))


# Logging

LAB_LOG_LEVEL = os.environ.get('LAB_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LAB_LOG_LEVEL,
            'propagate': False,
        }
        for app in ('core', 'weights', 'certifier', 'kernel', 'solver', 'decaylab', 'lab')
    },
}
