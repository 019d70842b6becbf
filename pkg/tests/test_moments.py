from fractions import Fraction

import pytest

from qlmoments import moments
from qlmoments.ffpoly import BudgetExceededError


class TestOracleRoutes:
    @pytest.mark.parametrize("D", [1, 2, 3])
    @pytest.mark.parametrize("r", [1, 2, 4])
    def test_three_routes_agree_exactly(self, D, r):
        ref = moments.moment(5, r, D, method="reflect")
        sv = moments.moment(5, r, D, method="sieve")
        nv = moments.moment(5, r, D, method="naive")
        assert (ref.a, ref.b) == (sv.a, sv.b) == (nv.a, nv.b)

    def test_degree_one_moments(self):
        # every monic linear character has L(1/2) = 1
        for r in (1, 4):
            m = moments.moment(5, r, 1)
            assert (m.a, m.b) == (Fraction(5), Fraction(0))

    def test_counts(self):
        for D in (1, 2, 3, 4):
            m = moments.moment(5, 1, D)
            assert m.count == moments.squarefree_count(5, D)
        assert moments.squarefree_count(5, 3) == 100

    def test_worker_invariance(self):
        one = moments.moment(5, 3, 4, workers=1)
        two = moments.moment(5, 3, 4, workers=2)
        eight = moments.moment(5, 3, 4, workers=8)
        assert (one.a, one.b) == (two.a, two.b) == (eight.a, eight.b)

    def test_float_matches_exact_embedding(self):
        m = moments.moment(5, 2, 3)
        assert abs(m.value - (float(m.a) + float(m.b) * 5**0.5)) < 1e-12 * abs(m.value)

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            moments.moment(5, 2, 9, method="naive", op_budget=10**6)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            moments.moment(5, 0, 3)
        with pytest.raises(ValueError):
            moments.moment(5, 2, 3, method="magic")


class TestSeriesAndResiduals:
    def test_zeroth_term(self):
        a, b = moments.zeroth_moment_pair(5, 1)
        assert (a, b) == (Fraction(-1, 4), Fraction(-1, 4))

    def test_generating_series_linear_coefficient(self):
        # the degree-one coefficient is M_r(1) = q
        xi = 0.01
        with_d1 = moments.generating_series(5, 4, 1, xi)
        without = moments.generating_series(5, 4, 0, xi)
        assert abs((with_d1 - without) / xi - 5) < 1e-9

    def test_residual_table_with_and_without_predictions(self):
        rows = moments.residual_table(5, 2, [1, 2], None, theta=0.45)
        assert rows[0].prediction == 0.0
        assert rows[0].residual == rows[0].moment_value
        preds = {1: rows[0].moment_value}
        rows2 = moments.residual_table(5, 2, [1], preds, theta=0.45)
        assert abs(rows2[0].residual) < 1e-12
        assert abs(rows2[0].normalized) < 1e-12

    def test_csv_row_shape(self):
        m = moments.moment(5, 2, 2)
        row = m.csv_row()
        assert row.split(",")[:3] == ["5", "2", "2"]
        assert row.endswith("0.000")
        assert len(row.split(",")) == 8

    def test_worker_env_override(self, monkeypatch):
        monkeypatch.setenv("QLM_WORKERS", "3")
        assert moments.default_workers() == 3
        monkeypatch.delenv("QLM_WORKERS")
        assert moments.default_workers() >= 1
