"""
Numerical defaults of the laboratory.

Star-imported by `base.py`. Values are read through
`core.app_settings.lab_settings`, which falls back to these defaults for any
key a deployment leaves out.
"""

LAB = {
    'WEIGHTS': {
        # e^{a N^{5/4}} overflows near 709; sweeps stay below this exponent
        'OVERFLOW_CAP': 600.0,
        'ETA_START': 0.5,
        'ETA_END': 0.75,
    },
    'CERTIFIER': {
        'A0_VALUES': [0.5, 1.0, 2.0],
        'EPSILON_VALUES': [0.0, 0.01, 0.1],
        'N_VALUES': [5, 10, 20, 40],
        'X_MIN': -10.0,
        'X_TAIL': 50.0,
        'X_STEP': 0.01,
        'T_MAX': 1.0,
        'T_STEP': 0.05,
        'REFINEMENT_TOLERANCE': 0.05,
        'N_UNIFORMITY_TOLERANCE': 0.10,
        'MATCHING_TOLERANCE': 1e-9,
        'SLACK_TOLERANCE': 1e-12,
        'BRIDGE_Y_MAX': 200.0,
        'BRIDGE_Y_POINTS': 4001,
        'KATO_BETA_VALUES': [0.2, 0.3, 0.5, 1.0],
        'KATO_DELTA_VALUES': [0.9, 0.5, 0.1, 0.01, 0.001],
        'KATO_BX_RANGE': 30.0,
        'KATO_BX_POINTS': 6001,
        'WORKERS': 1,
    },
    'KERNEL': {
        # oscillations past the last stationary point before the analytic tail
        'OSCILLATIONS': 200,
        'VALIDITY_WINDOW': 200.0,
        'GAUSS_NODES': 20,
        'TAIL_TOLERANCE': 1e-9,
        'RIGHT_FIT_WINDOW': [2.0, 8.0],
        'LEFT_FIT_WINDOW': [-40.0, -5.0],
        'TABLE_STEP': 0.02,
        'EXPONENT_TOLERANCE': 0.1,
    },
    'SOLVER': {
        'DEALIAS_FRACTION': 2.0 / 3.0,
        # phase advance of the highest retained mode per step
        'DISPERSIVE_CFL': 3.14159,
        # about a quarter of the RK4 reach along the imaginary axis
        'ADVECTIVE_CFL': 0.6,
        'LINEAR_DT': 0.01,
        'SENTINEL_BAND': 0.1,
        'SENTINEL_TOLERANCE': 1e-10,
    },
    'DECAYLAB': {
        'GAUSS_NODES': 12,
        'GRADING_LEVELS': 12,
        # widest quadrature panel inside the cutoff transition [ETA_START, ETA_END]
        'BLEND_PANEL': 0.005,
        'SPECTRAL_CUTOFF': 1e-15,
        'REFINEMENT_TOLERANCE': 0.05,
        'KATO_GROWTH_SLACK': 0.05,
        'LEDGER_TOLERANCE_LINEAR': 1e-6,
        'LEDGER_TOLERANCE_NONLINEAR': 1e-4,
        'QUADRATURE_TOLERANCE': 1e-9,
    },
    'RUNS': {
        'RECORD': False,
        'CSV_FLOAT_FORMAT': '.17g',
    },
}
