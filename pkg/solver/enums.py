"""
Solver Enumerations
"""

from core.enums import ChoiceEnum, _


class Preset(ChoiceEnum):
    """Named nonlinearities P."""
    ZERO = 'zero', _('Linear flow')
    KDV5 = 'kdv5', _('Fifth-order KdV hierarchy member')
    BENNEY1 = 'benney1', _('c1 u ux')
    BENNEY2 = 'benney2', _('u uxxx + 2 ux uxx')
    LISHER = 'lisher', _('Anharmonic lattice model')
    IVP17 = 'ivp17', _('b1 u uxxx + b2 ux uxx + b3 u^2 ux')
    D2D3 = 'd2d3', _('c uxx uxxx')


class CheckpointFormat(ChoiceEnum):
    CSV = 'csv', _('Header comments plus x,u rows')
    NPZ = 'npz', _('numpy archive')
