from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class SolverConfig(AppConfig):
    """Periodic pseudospectral evolution of the fifth-order flow."""

    name = 'solver'
    label = 'solver'
    verbose_name = _('Pseudospectral Solver')
