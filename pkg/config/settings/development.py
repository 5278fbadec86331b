"""
Django settings for the laboratory in env DEV.
"""

from .base import *  # noqa: F401,F403

DEBUG = True

ALLOWED_HOSTS = ['localhost', '127.0.0.1']

# Per-step solver diagnostics are logged at DEBUG
for _logger in LOGGING['loggers'].values():
    _logger['level'] = os.environ.get('LAB_LOG_LEVEL', 'DEBUG')
