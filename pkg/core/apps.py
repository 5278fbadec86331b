from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class CoreConfig(AppConfig):
    """Shared infrastructure: enums, services, workflows, settings access."""

    name = 'core'
    label = 'core'
    verbose_name = _('Laboratory Core')
