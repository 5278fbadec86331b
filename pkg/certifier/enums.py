"""
Certifier Enumerations
"""

from core.enums import ChoiceEnum, _


class Inequality(ChoiceEnum):
    """Row identifiers of a CertReport."""
    MASTER = 'master', _('Master inequality L <= c0 phi')
    COEFFICIENT_IDENTITY = 'coefficient_identity', _('Four-term form of L/phi on [1, N]')
    COEFFICIENT_SIGNS = 'coefficient_signs', _('Signs of c4, c3, c2, c1')
    DERIVATIVE_1 = 'derivative_1', _('|d phi| <= c1 <x>^{1/4} phi')
    DERIVATIVE_2 = 'derivative_2', _('|d2 phi| <= c2 <x>^{2/4} phi')
    DERIVATIVE_3 = 'derivative_3', _('|d3 phi| <= c3 <x>^{3/4} phi')
    DERIVATIVE_4 = 'derivative_4', _('|d4 phi| <= c4 <x> phi')
    DERIVATIVE_5 = 'derivative_5', _('|d5 phi| <= c5 <x>^{5/4} phi')
    COROLLARY = 'corollary', _('phi <= c (1 + <x> d phi)')
    POSITIVITY = 'positivity', _('phi > 0')
    MONOTONICITY = 'monotonicity', _('d phi >= 0')
    TIME_MONOTONICITY = 'time_monotonicity', _('dt phi <= 0')
    C4_MATCHING = 'c4_matching', _('Derivatives 0..4 continuous at 1 and N')
    FIFTH_JUMP = 'fifth_jump', _('Fifth derivative jumps at N')
    QUARTIC_GROWTH = 'quartic_growth', _('phi / <x>^4 bounded')
    POINTWISE_LIMIT = 'pointwise_limit', _('phi_N -> exp(a x_+^{5/4}) as N grows')
    DOMINANCE_THRESHOLD = 'dominance_threshold', _('Fitted c behind N0')
    INITIAL_DOMINANCE = 'initial_dominance', _('phi_N(x, 0) <= exp(a0 x_+^{5/4})')
    LOG_SPACE = 'log_space', _('Linear and log evaluation agree')
    BRIDGE_R = 'bridge_R', _('R_N lower bound')
    BRIDGE_R_X = 'bridge_R_x', _('dx R_N lower bound')
    BRIDGE_R_A = 'bridge_R_a', _('dt R_N / a\' lower bound')
    BRIDGE_P = 'bridge_P', _('P_N lower bound')
    BRIDGE_P_X = 'bridge_P_x', _('dx P_N explicit lower bound')
    BRIDGE_S = 'bridge_S', _('S_N lower bound')
    YOUNG_QUARTIC = 'young_quartic', _('Young step on the quartic coefficient')
    YOUNG_CUBIC = 'young_cubic', _('Young step on the cubic term')
    KATO_SUP = 'kato_sup', _('sup phi_delta = 1/delta')
    KATO_FIRST = 'kato_first', _('0 <= d phi_delta <= beta phi_delta')
    KATO_SECOND = 'kato_second', _('|d2 phi_delta| <= beta^2 w')
    KATO_THIRD = 'kato_third', _('|d3 phi_delta| <= 2 beta^3 w')
    KATO_DERIVATIVE = 'kato_derivative', _('|dj phi_delta| <= cj beta^j w')
    KATO_RATIO = 'kato_ratio', _('(d3)^2/d1 <= 4 beta^5 w')
    KATO_MASTER = 'kato_master', _('Master combination <= c0 beta^5 w')
    KATO_MASTER_PHI = 'kato_master_phi', _('Master combination <= c0 beta^5 phi_delta')
    KATO_MONOTONE_DELTA = 'kato_monotone_delta', _('phi_delta increases as delta decreases')
    KATO_LIMIT = 'kato_limit', _('phi_delta -> exp(beta x) as delta -> 0')


# rows whose ratio_sup is sup(bracket / quantity), i.e. 1 / c
BRIDGE_FITTED = (
    Inequality.BRIDGE_R, Inequality.BRIDGE_R_X, Inequality.BRIDGE_R_A,
    Inequality.BRIDGE_P, Inequality.BRIDGE_S,
)

DERIVATIVE_ROWS = (
    Inequality.DERIVATIVE_1, Inequality.DERIVATIVE_2, Inequality.DERIVATIVE_3,
    Inequality.DERIVATIVE_4, Inequality.DERIVATIVE_5,
)
