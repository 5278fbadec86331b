"""
Kernel Enumerations
"""

from core.enums import ChoiceEnum, _


class KernelMethod(ChoiceEnum):
    """How a kernel sample was computed."""
    DIRECT = 'direct', _('Panel quadrature with analytic tail')
    CONTOUR = 'contour', _('Rotated contour (x >= 0)')
    AUTO = 'auto', _('Contour for x >= 0, direct otherwise')
