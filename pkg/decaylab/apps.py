from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class DecaylabConfig(AppConfig):
    """Weighted norms, decay experiments and the energy ledger."""

    name = 'decaylab'
    label = 'decaylab'
    verbose_name = _('Decay Laboratory')
