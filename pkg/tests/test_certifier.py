"""
Certifier Tests

Row merging, report verdicts and desk-scale certification sweeps.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from certifier.checks import certify_family, certify_kato, certify_matching, certify_shape
from certifier.enums import Inequality
from certifier.reports import CSV_COLUMNS, CertReport, CertRow
from certifier.services import CertifierService
from certifier.sweeps import SweepSpec
from core.enums import Verdict
from core.services.base import ValidationError
from weights.piecewise import PiecewiseWeight


def _row(ratio, verdict=Verdict.PASS, x_star=None, **labels):
    return CertRow(ineq_id='master', ratio_sup=ratio, verdict=verdict, x_star=x_star,
                   a0=1.0, epsilon=0.0, N=10, **labels)


class TestCertRow:
    """Test suite for row merging."""

    def test_merge_takes_sup_and_witness(self):
        """Test that merging keeps the larger ratio and its witness."""
        merged = _row(1.0, x_star=2.0).merge(_row(3.0, x_star=5.0))
        assert merged.ratio_sup == 3.0
        assert merged.x_star == 5.0

    def test_merge_worse_verdict_wins(self):
        """Test that a failing row supplies the witness even with a smaller ratio."""
        merged = _row(3.0, x_star=5.0).merge(_row(1.0, Verdict.FAIL, x_star=2.0))
        assert merged.verdict == Verdict.FAIL
        assert merged.x_star == 2.0
        assert merged.ratio_sup == 3.0

    def test_merge_is_associative(self):
        """Test (a·b)·c == a·(b·c) for rows with one key."""
        a, b, c = _row(1.0, x_star=1.0), _row(2.0, Verdict.FAIL, x_star=2.0), _row(4.0, x_star=3.0)
        assert a.merge(b).merge(c) == a.merge(b.merge(c))

    def test_merge_nan_loses(self):
        """Test that NaN never beats a finite ratio."""
        assert _row(math.nan).merge(_row(2.0)).ratio_sup == 2.0

    def test_merge_rejects_other_key(self):
        """Test that rows of different keys cannot merge."""
        with pytest.raises(ValueError):
            _row(1.0).merge(CertRow(ineq_id='positivity', ratio_sup=1.0, verdict=Verdict.PASS))

    def test_csv_row(self):
        """Test the CSV schema and the pass column."""
        row = _row(0.5).as_csv_row()
        assert tuple(row) == CSV_COLUMNS
        assert row['pass'] == '1'
        assert row['beta'] == ''


class TestCertReport:
    """Test suite for report verdicts."""

    def test_empty_report_has_not_passed(self):
        """Test that an empty report never passes."""
        assert not CertReport().passed

    def test_add_merges_same_key(self):
        """Test that adding a row with an existing key merges it."""
        report = CertReport().add(_row(1.0)).add(_row(2.0))
        assert len(report.rows) == 1
        assert report.sup(Inequality.MASTER) == 2.0

    def test_witness_of_first_failure(self):
        """Test that the witness names the failing row."""
        report = CertReport().add(_row(1.0, Verdict.FAIL, x_star=7.0))
        assert not report.passed
        assert report.witness()['x_star'] == '7'

    def test_defect(self):
        """Test that a defective row marks the report."""
        assert CertReport().add(_row(1.0, Verdict.DEFECT)).has_defect


class TestSweepSpec:
    """Test suite for sweep grids."""

    def test_x_grid_contains_breakpoints(self, small_sweep):
        """Test that 0, 1/2, 3/4, 1 and N lie on the x grid."""
        x = small_sweep.x_grid(10)
        for point in (0.0, 0.5, 0.75, 1.0, 10.0):
            assert np.any(x == point)

    def test_refined_halves_steps(self, small_sweep):
        """Test that refinement halves the steps and stops there."""
        fine = small_sweep.refined()
        assert fine.x_step == small_sweep.x_step / 2
        assert fine.t_step == small_sweep.t_step / 2
        assert not fine.refine

    def test_overflow_cap_skips_points(self):
        """Test that points with a0 N^{5/4} above the cap are skipped."""
        spec = SweepSpec.from_settings(a0_values=(2.0,), epsilon_values=(0.0,), N_values=(40, 500))
        assert [p.N for p in spec.weight_points()] == [40]

    def test_invalid_delta(self):
        """Test that δ outside (0, 1) is rejected."""
        with pytest.raises(ValidationError):
            SweepSpec.from_settings(delta_values=(1.5,))


class TestChecks:
    """Test suite for the individual checks."""

    def test_shape_rows_pass(self, small_sweep):
        """Test positivity and monotonicity rows for one weight."""
        report = certify_shape(PiecewiseWeight.build(1.0, 0.0, 10), small_sweep)
        for ineq in (Inequality.POSITIVITY, Inequality.MONOTONICITY, Inequality.TIME_MONOTONICITY):
            assert all(row.passed for row in report.rows_for(ineq))

    def test_matching_rows(self, small_sweep):
        """Test C⁴ matching and the fifth-derivative jump."""
        report = certify_matching(PiecewiseWeight.build(1.0, 0.0, 10), small_sweep)
        assert report.rows_for(Inequality.C4_MATCHING)[0].passed
        assert report.rows_for(Inequality.FIFTH_JUMP)[0].passed

    def test_kato_rows_pass(self, small_sweep):
        """Test the Kato bounds on one (β, δ)."""
        report = certify_kato(small_sweep)
        for ineq in (Inequality.KATO_SUP, Inequality.KATO_FIRST, Inequality.KATO_SECOND,
                     Inequality.KATO_THIRD, Inequality.KATO_RATIO):
            rows = report.rows_for(ineq)
            assert rows and all(row.passed for row in rows)

    def test_kato_fitted_rows_refined(self, small_sweep):
        """Test that c_j and the master rows are judged against the refined x grid."""
        spec = replace(small_sweep, refine=True)
        fitted = [f"{Inequality.KATO_DERIVATIVE.value}_{j}" for j in range(1, 6)]
        fitted += [Inequality.KATO_MASTER.value, Inequality.KATO_MASTER_PHI.value]
        report = certify_kato(spec)
        for ineq in fitted:
            rows = report.rows_for(ineq)
            assert rows and all(row.passed and 'refined' in row.note for row in rows)

        strict = certify_kato(replace(spec, refinement_tolerance=-1.0))
        assert not any(row.passed for ineq in fitted for row in strict.rows_for(ineq))

    @pytest.mark.slow
    def test_family_constants_finite(self, small_sweep):
        """Test that a family sweep fits a finite master constant."""
        report = certify_family(1.0, 0.0, small_sweep)
        assert math.isfinite(report.constants['c0_fit'])
        assert not report.has_defect


@pytest.mark.slow
class TestCertifierService:
    """Test suite for full certification."""

    def test_small_sweep_report(self, small_sweep):
        """Test the verdict mapping and the master rows of a coarse sweep."""
        result = CertifierService().certify(spec=small_sweep)
        report = result.data
        assert not report.has_defect
        assert result.exit_code == (0 if report.passed else 2)
        assert all(row.passed for row in report.rows_for(Inequality.MASTER))
        assert report.rows_for(Inequality.KATO_RATIO)

    def test_pool_matches_serial(self, small_sweep):
        """Test that a process pool gives the same rows as one process."""
        serial = CertifierService(context={'workers': 1}).certify(spec=small_sweep).data
        pooled = CertifierService(context={'workers': 2}).certify(spec=small_sweep).data
        assert serial.csv_rows() == pooled.csv_rows()
