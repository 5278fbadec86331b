from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class LabConfig(AppConfig):
    """Configuration, orchestration and emission of laboratory runs."""

    name = 'lab'
    label = 'lab'
    verbose_name = _('Laboratory Runs')

    def ready(self):
        """Initialize signals when the app is ready."""
        from . import signals  # noqa: F401
