"""
Django settings for batch runs (env PROD): full sweeps, quiet logs.
"""

from .base import *  # noqa: F401,F403

DEBUG = False

LAB['RUNS']['RECORD'] = True
LAB['CERTIFIER']['WORKERS'] = int(os.environ.get('LAB_WORKERS', '4'))
