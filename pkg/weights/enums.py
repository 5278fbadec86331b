"""
Weight Enumerations
"""

from core.enums import ChoiceEnum, _


class Region(ChoiceEnum):
    """Pieces of the weight φ_N, left to right."""
    FLAT = 0, _('x <= 0 (constant)')
    BLEND = 1, _('0 < x < 1 (blended exponent)')
    CORE = 2, _('1 <= x <= N (moving exponential)')
    BRIDGE = 3, _('x > N (quartic bridge)')


class Side(ChoiceEnum):
    """Which one-sided value to return at x = N."""
    LEFT = 'left', _('Left limit')
    RIGHT = 'right', _('Right limit')
