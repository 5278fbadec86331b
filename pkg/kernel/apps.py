from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class KernelConfig(AppConfig):
    """Fundamental solution of the linear odd-order flow."""

    name = 'kernel'
    label = 'kernel'
    verbose_name = _('Dispersive Kernel')
