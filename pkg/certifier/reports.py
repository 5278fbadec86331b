"""
Certification reports.

A `CertReport` is a list of `CertRow`s keyed by (ineq_id, parameters).
Merging takes the sup of `ratio_sup` with its witness and the worst verdict,
so reports from disjoint pieces of a sweep combine in any grouping.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

from core.enums import Verdict
from .enums import BRIDGE_FITTED, DERIVATIVE_ROWS, Inequality

CSV_COLUMNS = (
    'ineq_id', 'a0', 'epsilon', 'N', 'x_star', 't_star', 'ratio_sup', 'pass',
    'beta', 'delta', 'verdict', 'note',
)

_SEVERITY = {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.DEFECT: 2}


def _nan_last(value: float) -> float:
    return -math.inf if math.isnan(value) else value


@dataclass(frozen=True)
class CertRow:
    ineq_id: str
    ratio_sup: float
    verdict: Verdict
    a0: Optional[float] = None
    epsilon: Optional[float] = None
    N: Optional[int] = None
    x_star: Optional[float] = None
    t_star: Optional[float] = None
    beta: Optional[float] = None
    delta: Optional[float] = None
    note: str = ''

    @property
    def key(self) -> Tuple:
        return (self.ineq_id, self.a0, self.epsilon, self.N, self.beta, self.delta)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def merge(self, other: 'CertRow') -> 'CertRow':
        """
        Sup of the ratio and the worse verdict. The witness comes from the
        worse verdict, then from the larger ratio; the left row wins ties.
        """
        if other.key != self.key:
            raise ValueError(f"cannot merge rows {self.key} and {other.key}")
        ratio = max(self.ratio_sup, other.ratio_sup, key=_nan_last)
        if _SEVERITY[other.verdict] != _SEVERITY[self.verdict]:
            witness = max(self, other, key=lambda row: _SEVERITY[row.verdict])
        elif _nan_last(other.ratio_sup) > _nan_last(self.ratio_sup):
            witness = other
        else:
            witness = self
        return replace(witness, ratio_sup=ratio)

    def as_csv_row(self, float_format: str = '.17g') -> Dict[str, str]:
        def fmt(value):
            if value is None:
                return ''
            if isinstance(value, float):
                return format(value, float_format)
            return str(value)

        return {
            'ineq_id': self.ineq_id,
            'a0': fmt(self.a0),
            'epsilon': fmt(self.epsilon),
            'N': fmt(self.N),
            'x_star': fmt(self.x_star),
            't_star': fmt(self.t_star),
            'ratio_sup': fmt(float(self.ratio_sup)),
            'pass': '1' if self.passed else '0',
            'beta': fmt(self.beta),
            'delta': fmt(self.delta),
            'verdict': self.verdict.value,
            'note': self.note,
        }


@dataclass
class CertReport:
    """Verdicts and fitted constants of one sweep."""
    sweep: Dict = field(default_factory=dict)
    rows: List[CertRow] = field(default_factory=list)

    def add(self, row: CertRow) -> 'CertReport':
        for i, existing in enumerate(self.rows):
            if existing.key == row.key:
                self.rows[i] = existing.merge(row)
                return self
        self.rows.append(row)
        return self

    def extend(self, rows: Iterable[CertRow]) -> 'CertReport':
        for row in rows:
            self.add(row)
        return self

    def merge(self, other: 'CertReport') -> 'CertReport':
        merged = CertReport(sweep=dict(self.sweep), rows=list(self.rows))
        for key, value in other.sweep.items():
            merged.sweep.setdefault(key, value)
        return merged.extend(other.rows)

    @classmethod
    def combine(cls, reports: Iterable['CertReport']) -> 'CertReport':
        out = cls()
        for report in reports:
            out = out.merge(report)
        return out

    # -- verdicts -----------------------------------------------------------

    @property
    def passed(self) -> bool:
        """True iff every row passed; an empty report has not passed."""
        return bool(self.rows) and all(row.passed for row in self.rows)

    @property
    def has_defect(self) -> bool:
        return any(row.verdict == Verdict.DEFECT for row in self.rows)

    def failures(self) -> List[CertRow]:
        return [row for row in self.rows if not row.passed]

    def rows_for(self, ineq_id) -> List[CertRow]:
        ineq_id = getattr(ineq_id, 'value', ineq_id)
        return [row for row in self.rows if row.ineq_id == ineq_id]

    def sup(self, ineq_id) -> float:
        values = [row.ratio_sup for row in self.rows_for(ineq_id)]
        return max(values) if values else math.nan

    def witness(self) -> Dict:
        """Coordinates of the first failing or defective row."""
        for row in self.failures():
            return {k: v for k, v in row.as_csv_row().items() if v != ''}
        return {}

    # -- fitted constants ---------------------------------------------------

    @property
    def constants(self) -> Dict[str, object]:
        bridge = [self.sup(i) for i in BRIDGE_FITTED if self.rows_for(i)]
        bridge_sup = max(bridge) if bridge else math.nan
        return {
            'c0_fit': self.sup(Inequality.MASTER),
            'cj_fit': [self.sup(i) for i in DERIVATIVE_ROWS],
            'c0_tilde_fit': self.sup(Inequality.COROLLARY),
            'kato_c0_fit': self.sup(Inequality.KATO_MASTER),
            'bridge_c_fit': 1.0 / bridge_sup if bridge_sup > 0 else math.nan,
            'dominance_c_fit': self.sup(Inequality.DOMINANCE_THRESHOLD),
        }

    def summary(self) -> Dict[str, object]:
        summary = {'passed': self.passed, 'rows': len(self.rows), 'failures': len(self.failures())}
        for name, value in self.constants.items():
            if isinstance(value, list):
                for j, v in enumerate(value, start=1):
                    summary[f'c{j}_fit'] = v
            else:
                summary[name] = value
        return summary

    def csv_rows(self, float_format: str = '.17g') -> List[Dict[str, str]]:
        return [row.as_csv_row(float_format) for row in self.rows]
