from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class WeightsConfig(AppConfig):
    """Closed-form decay weights and their derivatives."""

    name = 'weights'
    label = 'weights'
    verbose_name = _('Decay Weights')
