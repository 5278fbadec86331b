"""
Decay Laboratory Enumerations
"""

from core.enums import ChoiceEnum, _


class ProfileKind(ChoiceEnum):
    """Initial data families."""
    GAUSSIAN = 'gaussian', _('A exp(-((x - x0)/w)^2)')
    SECH2 = 'sech2', _('A sech^2((x - x0)/w)')
    BUMP = 'bump', _('Compactly supported C-infinity bump')
    PACKET = 'packet', _('Random-phase modes under a Gaussian envelope')


class Experiment(ChoiceEnum):
    PERSISTENCE = 'persistence', _('Moving-weight persistence')
    DIFFERENCE = 'difference', _('Weighted decay of a difference')
    KATO = 'kato', _('Exponential Kato weight')
    LEDGER = 'ledger', _('Weighted energy ledger')
