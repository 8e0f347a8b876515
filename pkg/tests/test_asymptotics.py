import numpy as np
import pytest

from bottlab.asymptotics import (
    CSV_HEADER,
    STEP1_CAP,
    STEP2_D,
    calibrate_step_caps,
    lipschitz_commutator_check,
    riemann_sum_half,
    run_step_checks,
    step1_check,
    step2_check,
    step3_check,
    step4_check,
    sweep,
    to_csv,
    to_rows,
)
from bottlab.loring import loring_element
from bottlab.matrixcore import UnitaryMatrix


@pytest.fixture(scope="module")
def records(triple):
    return sweep([8, 16, 32, 64, 128], triple)


def by_n(records, n):
    return next(r for r in records if r.N == n)


class TestSweepRecords:
    def test_trace_is_n(self, triple):
        r = sweep([2], triple)[0]
        assert abs(r.tr_e - 2.0) <= 1e-10

    def test_square_trace_identity(self, records):
        assert abs(by_n(records, 32).tr_e2 - 32.0) <= 1e-8

    def test_index_one(self, records):
        assert by_n(records, 32).index == 1

    def test_gap_closure_flags_row(self, triple):
        # the spectrum of the N = 4 element touches 1/2 exactly
        r = sweep([4], triple)[0]
        assert r.flagged
        assert r.gap == 0.0
        assert r.index is None

    def test_tiny_n_is_degenerate_but_clean(self, triple):
        r = sweep([2], triple)[0]
        assert not r.flagged
        assert r.index == 0

    def test_rejects_n_below_two(self, triple):
        with pytest.raises(ValueError):
            sweep([1], triple)


class TestStep1:
    def test_scalar_instance(self):
        # chi(0.6) - 0.6 = 0.4 <= 2 |0.36 - 0.6|
        assert 1.0 - 0.6 <= 2 * abs(0.36 - 0.6)

    def test_idempotent_case(self, triple):
        r = sweep([2], triple)[0]
        assert r.norm_chi_minus_e <= 1e-9
        assert step1_check(r)

    def test_all_rows(self, records):
        assert all(step1_check(r) for r in records)

    def test_scaled_deviation_is_stable(self, records):
        n16 = 16 * by_n(records, 16).norm_chi_minus_e
        n64 = 64 * by_n(records, 64).norm_chi_minus_e
        assert n16 <= 1.5 * n64
        assert n64 <= 1.5 * n16

    def test_frozen_cap_matches_calibration_rule(self, records):
        cap, _ = calibrate_step_caps(by_n(records, 8))
        assert cap == pytest.approx(STEP1_CAP, rel=1e-12)


class TestStep2:
    def test_smoothing_polynomial_endpoints(self):
        p = lambda x: 3 * x ** 2 - 2 * x ** 3
        assert p(0.0) == 0.0
        assert p(1.0) == 1.0

    def test_all_rows(self, records):
        assert all(step2_check(r) for r in records)

    def test_decay(self, records):
        def dev(r):
            return abs((r.raw_index + r.N) - (3 * r.tr_e2 - 2 * r.tr_e3))

        assert dev(by_n(records, 128)) < dev(by_n(records, 16))

    def test_frozen_d_matches_calibration_rule(self, records):
        _, d = calibrate_step_caps(by_n(records, 8))
        assert d == pytest.approx(STEP2_D, rel=1e-12)


class TestStep3:
    def test_small(self, triple):
        r = sweep([2], triple)[0]
        assert abs(r.tr_e2 - 2.0) <= 1e-10

    def test_n64(self, records):
        assert step3_check(by_n(records, 64))

    def test_commuting_pair_not_clock_shift(self, triple, rng):
        # idempotent element: tr e^2 = tr e = n for any commuting unitaries
        n = 5
        u = UnitaryMatrix(np.diag(np.exp(2j * np.pi * rng.random(n))))
        v = UnitaryMatrix(np.diag(np.exp(2j * np.pi * rng.random(n))))
        e = loring_element(u, v, triple).matrix.a
        assert np.trace(e @ e).real == pytest.approx(np.trace(e).real, abs=1e-10)
        assert np.trace(e).real == pytest.approx(n, abs=1e-10)


class TestStep4:
    def test_closed_form_anchor(self):
        lam = np.linspace(0, 1, 200_001)
        assert 3 * np.trapezoid(lam - lam ** 2, lam) == pytest.approx(0.5, abs=1e-9)

    def test_riemann_sum_converges(self, triple):
        assert riemann_sum_half(triple, 512) == pytest.approx(0.5, abs=0.02)

    def test_cubic_deviation_at_256(self, triple):
        r = sweep([256], triple)[0]
        assert abs(r.tr_e3 - 255.5) <= 0.05

    def test_step4_over_records(self, records, triple):
        assert step4_check(records, triple)

    def test_monotone_guard_fires(self, records, triple):
        import dataclasses

        bad = dataclasses.replace(by_n(records, 64), tr_e3=by_n(records, 64).N - 0.5 + 1.0)
        assert not step4_check([by_n(records, 16), bad], triple)


class TestLipschitzCommutator:
    def test_constant_symbol(self):
        assert lipschitz_commutator_check(lambda x: np.ones_like(x), 16)

    def test_default_f(self, triple):
        assert lipschitz_commutator_check(triple.f, 32)

    def test_unit_loop_closed_form(self):
        from bottlab.matrixcore import commutator, operator_norm
        from bottlab.model import canonical_pair

        u, b = canonical_pair(16)
        norm = operator_norm(commutator(u, b))
        assert norm == pytest.approx(2 * np.sin(np.pi / 16), abs=1e-12)
        assert lipschitz_commutator_check(lambda x: np.exp(2j * np.pi * x), 16)


class TestReports:
    def test_csv_header_exact(self, records):
        text = to_csv(records)
        assert text.splitlines()[0] == CSV_HEADER
        assert CSV_HEADER == ("N,tr_e,tr_e2,tr_e3,norm_chi_minus_e,"
                              "norm_e2_minus_e,gap,raw_index,index")

    def test_csv_deterministic(self, triple):
        a = to_csv(sweep([8, 16], triple))
        b = to_csv(sweep([8, 16], triple))
        assert a == b

    def test_csv_flagged_row(self, triple):
        text = to_csv(sweep([4], triple))
        row = text.splitlines()[1].split(",")
        assert row[0] == "4"
        assert row[-1] == "nan"

    def test_rows_schema(self, records):
        rows = to_rows(records)
        assert list(rows[0].keys()) == CSV_HEADER.split(",")

    def test_run_step_checks_green(self, records, triple):
        assert all(run_step_checks(records, triple).values())
