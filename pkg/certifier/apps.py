from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class CertifierConfig(AppConfig):
    """Grid certification of the weight inequalities."""

    name = 'certifier'
    label = 'certifier'
    verbose_name = _('Weight Certifier')
