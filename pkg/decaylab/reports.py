"""
Decay experiment reports and energy-ledger samples.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from core.enums import Verdict

CSV_COLUMNS = ('t', 'a_t', 'W_moving', 'W_frozen', 'K_beta', 'ledger_residual')


@dataclass
class LedgerSample:
    """
    Terms of the weighted energy identity at one time:

        dE/dt - ∫u²∂_tφ + 5∫(u_xx)²∂_xφ - 5∫(u_x)²∂³φ + ∫u²∂⁵φ
            = 2∫Fuφ + [G]_window

    with [G] the flux through the window edges left by integrating by parts
    on a finite window. `residual` is left side minus right side.
    """
    t: float
    energy: float
    dE_dt: float
    time_term: float
    dispersive_term: float
    third_term: float
    fifth_term: float
    source_term: float
    boundary_term: float
    residual: float
    energy_lhs: float = math.nan
    energy_rhs: float = math.nan
    majorant: float = math.nan
    c0: float = math.nan
    a4_slack: Dict[float, float] = field(default_factory=dict)

    @property
    def scale(self) -> float:
        return max(abs(v) for v in (
            self.dE_dt, self.time_term, self.dispersive_term, self.third_term,
            self.fifth_term, self.source_term, self.boundary_term,
        ))

    @property
    def relative_residual(self) -> float:
        scale = self.scale
        return abs(self.residual) / scale if scale > 0 else abs(self.residual)

    def energy_holds(self, tolerance: float) -> bool:
        return self.energy_lhs <= self.energy_rhs + tolerance * max(1.0, self.scale)

    def majorant_holds(self, tolerance: float) -> bool:
        return self.energy_rhs <= self.majorant + tolerance * max(1.0, abs(self.majorant))

    def a4_holds(self, tolerance: float) -> bool:
        return all(s >= -tolerance * max(1.0, self.scale) for s in self.a4_slack.values())


def _series(values: Optional[List[float]], n: int) -> List[float]:
    return list(values) if values else [math.nan] * n


@dataclass
class DecayReport:
    """Time series, fitted constants and checks of one decay experiment."""
    experiment: str
    times: List[float] = field(default_factory=list)
    a_t: List[float] = field(default_factory=list)
    W_moving: List[float] = field(default_factory=list)
    W_frozen: List[float] = field(default_factory=list)
    K_beta: List[float] = field(default_factory=list)
    ledger: List[LedgerSample] = field(default_factory=list)
    Lambda: float = math.nan
    constants: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    sentinel_max: float = 0.0
    defect: bool = False

    @property
    def passed(self) -> bool:
        return not self.defect and bool(self.checks) and all(self.checks.values())

    @property
    def verdict(self) -> Verdict:
        if self.defect:
            return Verdict.DEFECT
        return Verdict.of(self.passed)

    def ledger_residuals(self) -> Dict[float, float]:
        return {s.t: s.residual for s in self.ledger}

    def series(self) -> Dict[str, np.ndarray]:
        n = len(self.times)
        residuals = self.ledger_residuals()
        return {
            't': np.asarray(self.times),
            'a_t': np.asarray(_series(self.a_t, n)),
            'W_moving': np.asarray(_series(self.W_moving, n)),
            'W_frozen': np.asarray(_series(self.W_frozen, n)),
            'K_beta': np.asarray(_series(self.K_beta, n)),
            'ledger_residual': np.array([residuals.get(t, math.nan) for t in self.times]),
        }

    def csv_rows(self, float_format: str = '.17g') -> List[Dict[str, str]]:
        columns = self.series()
        rows = []
        for i in range(len(self.times)):
            rows.append({
                name: '' if math.isnan(columns[name][i]) else format(float(columns[name][i]), float_format)
                for name in CSV_COLUMNS
            })
        return rows

    def summary(self) -> Dict[str, Any]:
        out = {'experiment': self.experiment, 'passed': self.passed,
               'verdict': self.verdict.value, 'sentinel_max': self.sentinel_max}
        if not math.isnan(self.Lambda):
            out['Lambda'] = self.Lambda
        out.update(self.constants)
        out.update({f'check_{k}': v for k, v in self.checks.items()})
        return out

    def failed_checks(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]
