import numpy as np
import pytest

from tscast.datasets import load as load_dataset
from tscast.evaluation import (
    BacktestPlan,
    backtest,
    grid_search,
    historical_forecasts,
    metric,
)
from tscast.exceptions import (
    BacktestModelError,
    EmptyGrid,
    EmptyIntersection,
    GridSearchFailed,
    IndexMismatch,
    InvalidConfig,
    MissingInsample,
    PlanInfeasible,
    ZeroDenominator,
)
from tscast.models import NaiveDrift, NaiveSeasonal

from conftest import rseries


class Oracle:
    """Test-only model that looks up the future actuals it was built with."""

    def __init__(self, full):
        self.full = full

    def fit(self, train):
        self._t0 = len(train)
        return self

    def predict(self, n):
        return self.full.slice_positions(self._t0, self._t0 + n)


# --- metric values ------------------------------------------------------------------


def test_perfect_forecast_scores_zero():
    a = rseries([3.0, 4.0])
    assert metric("mae", a, a) == 0.0
    assert metric("smape", a, a) == 0.0


def test_mape_hand_case():
    assert metric("mape", rseries([100.0]), rseries([110.0])) == 10.0


def test_mase_hand_case():
    # MAE([3,4] vs [2,3]) = 1; seasonal-naive insample MAE at m=1 is 1
    got = metric(
        "mase",
        rseries([3.0, 4.0], start=4),
        rseries([2.0, 3.0], start=4),
        insample=rseries([1.0, 2.0, 3.0, 4.0]),
        m=1,
    )
    assert got == 1.0


def test_metric_identities_randomized():
    rng = np.random.default_rng(0)
    for _ in range(300):
        T = rng.integers(2, 40)
        a = rseries(rng.normal(size=T) * 10)
        p = rseries(rng.normal(size=T) * 10)
        mae = metric("mae", a, p)
        mse = metric("mse", a, p)
        rmse = metric("rmse", a, p)
        assert np.isclose(rmse**2, mse, rtol=1e-12)
        assert mae <= rmse + 1e-12
        assert np.isclose(metric("pinball", a, p, q=0.5), 0.5 * mae, rtol=1e-12)


def test_metric_time_shift_invariant():
    rng = np.random.default_rng(1)
    a, p = rng.normal(size=20), rng.normal(size=20)
    for kind in ("mae", "mse", "rmse", "smape"):
        assert metric(kind, rseries(a), rseries(p)) == metric(
            kind, rseries(a, start=50), rseries(p, start=50)
        )


def test_stochastic_prediction_reduced_by_median():
    samples = np.array([[[1.0, 2.0, 9.0]], [[4.0, 0.0, 2.0]]])  # medians 2, 2
    got = metric("mae", rseries([3.0, 3.0]), rseries(samples))
    assert got == 1.0


def test_pinball_uses_empirical_quantile():
    rng = np.random.default_rng(2)
    samples = rng.normal(size=(6, 1, 200))
    a = rseries(rng.normal(size=6))
    p = rseries(samples)
    for q in (0.1, 0.9):
        yq = np.quantile(samples, q, axis=2)
        e = a.values[:, :, 0] - yq
        expect = (q * np.clip(e, 0, None) + (1 - q) * np.clip(-e, 0, None)).mean()
        assert np.isclose(metric("pinball", a, p, q=q), expect, rtol=1e-12)


# --- metric alignment ---------------------------------------------------------------


def test_metric_restricted_to_time_intersection():
    a = rseries(np.arange(10.0))
    p = rseries(np.arange(10.0) + 1.0, start=5)  # overlaps positions 5..9
    assert metric("mae", a, p) == np.abs(np.arange(5.0, 10.0) - (np.arange(5) + 1)).mean()


def test_disjoint_series_rejected():
    with pytest.raises(EmptyIntersection):
        metric("mae", rseries([1.0, 2.0]), rseries([1.0, 2.0], start=10))


def test_components_matched_by_name():
    a = rseries(np.column_stack([np.ones(4), np.zeros(4)]), components=["a", "b"])
    p = rseries(np.column_stack([np.zeros(4), np.ones(4)]), components=["b", "a"])
    assert metric("mae", a, p) == 0.0


def test_missing_component_rejected():
    a = rseries(np.ones((4, 2)), components=["a", "b"])
    p = rseries(np.ones(4), components=["a"])
    with pytest.raises(IndexMismatch):
        metric("mae", a, p)


def test_metric_denominator_errors():
    with pytest.raises(ZeroDenominator):
        metric("mape", rseries([0.0, 1.0]), rseries([1.0, 1.0]))
    with pytest.raises(ZeroDenominator):
        metric("smape", rseries([0.0, 1.0]), rseries([0.0, 1.0]))
    with pytest.raises(ZeroDenominator):
        metric(
            "mase", rseries([1.0]), rseries([2.0]),
            insample=rseries([5.0, 5.0, 5.0]), m=1,
        )


def test_mase_needs_insample_and_m():
    a, p = rseries([1.0, 2.0]), rseries([1.0, 2.0])
    with pytest.raises(MissingInsample):
        metric("mase", a, p)
    with pytest.raises(MissingInsample):
        metric("mase", a, p, insample=rseries([1.0, 2.0]), m=5)


def test_unknown_metric_and_bad_quantile():
    a = rseries([1.0])
    with pytest.raises(InvalidConfig):
        metric("wape", a, a)
    with pytest.raises(InvalidConfig):
        metric("pinball", a, a, q=1.5)


# --- historical forecasts -----------------------------------------------------------


def test_origin_enumeration():
    s = rseries(np.zeros(100))
    plan = BacktestPlan(start=50, horizon=10, stride=5)
    assert plan.origins(s) == [50, 55, 60, 65, 70, 75, 80, 85, 90]
    fcs = historical_forecasts(lambda: NaiveSeasonal(K=1), s, plan)
    assert len(fcs) == 9
    assert [f.start for f in fcs] == plan.origins(s)


def test_boundary_start_single_window():
    s = rseries(np.arange(20.0))
    plan = BacktestPlan(start=15, horizon=5)
    fcs = historical_forecasts(lambda: NaiveDrift(), s, plan)
    assert len(fcs) == 1 and len(fcs[0]) == 5


def test_infeasible_plans():
    s = rseries(np.arange(20.0))
    with pytest.raises(PlanInfeasible):
        BacktestPlan(start=18, horizon=5).origins(s)
    with pytest.raises(PlanInfeasible):
        BacktestPlan(start=0, horizon=5).origins(s)
    with pytest.raises(InvalidConfig):
        BacktestPlan(start=5, horizon=0)
    with pytest.raises(InvalidConfig):
        BacktestPlan(start=5, horizon=1, stride=0)


def test_fractional_start():
    s = rseries(np.zeros(100))
    # same resolution rule as series splitting: int(0.75*100) - 1
    assert BacktestPlan(start=0.75, horizon=10).origins(s)[0] == 74


def test_model_failure_annotated_with_origin():
    class Broken:
        def fit(self, train):
            if len(train) >= 7:
                raise RuntimeError("boom")
            return self

        def predict(self, n):
            return rseries(np.zeros(n))

    s = rseries(np.arange(10.0))
    with pytest.raises(BacktestModelError) as exc:
        historical_forecasts(lambda: Broken(), s, BacktestPlan(start=5, horizon=1))
    assert exc.value.origin == 7
    assert "boom" in str(exc.value)


def test_stride_subset_and_no_retrain_consistency():
    rng = np.random.default_rng(3)
    s = rseries(np.cumsum(rng.normal(size=60)))
    dense = historical_forecasts(
        lambda: NaiveDrift(), s, BacktestPlan(start=30, horizon=4, retrain=False)
    )
    sparse = historical_forecasts(
        lambda: NaiveDrift(), s,
        BacktestPlan(start=30, horizon=4, stride=3, retrain=False),
    )
    dense_by_start = {f.start: f for f in dense}
    assert set(f.start for f in sparse) <= set(dense_by_start)
    for f in sparse:
        assert f == dense_by_start[f.start]


def test_retrain_true_refits_per_origin():
    s = rseries(np.arange(1.0, 11.0))
    plan = BacktestPlan(start=5, horizon=1)
    fcs = historical_forecasts(lambda: NaiveSeasonal(K=1), s, plan)
    # each forecast repeats the last value before its own origin
    assert [f.values[0, 0, 0] for f in fcs] == [5.0, 6.0, 7.0, 8.0, 9.0]


# --- backtest -----------------------------------------------------------------------


def test_oracle_model_backtests_to_zero():
    rng = np.random.default_rng(4)
    s = rseries(rng.normal(size=50))
    score = backtest(lambda: Oracle(s), s, BacktestPlan(start=25, horizon=5, stride=3))
    assert score == 0.0


def test_naive_backtest_hand_case():
    s = rseries(np.arange(1.0, 11.0))
    score = backtest(lambda: NaiveSeasonal(K=1), s, BacktestPlan(start=5, horizon=1))
    assert score == 1.0


def test_backtest_median_reduction():
    s = rseries(np.arange(1.0, 11.0))
    plan = BacktestPlan(start=5, horizon=1)
    assert backtest(lambda: NaiveSeasonal(K=1), s, plan, reduction="median") == 1.0
    with pytest.raises(InvalidConfig):
        backtest(lambda: NaiveSeasonal(K=1), s, plan, reduction="max")


def test_backtest_never_hits_empty_intersection():
    rng = np.random.default_rng(5)
    for _ in range(25):
        T = int(rng.integers(20, 60))
        s = rseries(rng.normal(size=T), start=int(rng.integers(-5, 5)))
        start = int(rng.integers(2, T - 10))
        h = int(rng.integers(1, 8))
        stride = int(rng.integers(1, 5))
        plan = BacktestPlan(start=s.index[start], horizon=h, stride=stride)
        backtest(lambda: NaiveDrift(), s, plan)  # must not raise


# --- grid search --------------------------------------------------------------------


def test_grid_single_combination():
    s = rseries(np.arange(1.0, 11.0))
    plan = BacktestPlan(start=5, horizon=1)
    params, score = grid_search(NaiveSeasonal, {"K": [1]}, s, plan)
    assert params == {"K": 1}
    assert score == 1.0


def test_grid_ties_keep_earliest():
    s = rseries(np.full(30, 7.0))
    plan = BacktestPlan(start=20, horizon=2)
    params, score = grid_search(NaiveSeasonal, {"K": [2, 1]}, s, plan)
    assert params == {"K": 2} and score == 0.0


def test_seasonal_grid_on_air_passengers():
    air = load_dataset("air_passengers")
    plan = BacktestPlan(start=0.75, horizon=12, stride=12)
    params, _ = grid_search(NaiveSeasonal, {"K": [1, 12]}, air, plan)
    assert params == {"K": 12}


def test_empty_grid():
    s = rseries(np.arange(10.0))
    plan = BacktestPlan(start=5, horizon=1)
    with pytest.raises(EmptyGrid):
        grid_search(NaiveSeasonal, {}, s, plan)
    with pytest.raises(EmptyGrid):
        grid_search(NaiveSeasonal, {"K": []}, s, plan)


def test_all_combinations_failing_reported():
    s = rseries(np.arange(10.0))
    plan = BacktestPlan(start=5, horizon=1)

    def factory(K):
        raise RuntimeError(f"no model for {K}")

    with pytest.raises(GridSearchFailed) as exc:
        grid_search(factory, {"K": [1, 2]}, s, plan)
    assert "K" in str(exc.value)


def test_partial_failures_tolerated():
    s = rseries(np.arange(1.0, 11.0))
    plan = BacktestPlan(start=5, horizon=1)

    def factory(K):
        if K == 99:
            raise RuntimeError("bad combination")
        return NaiveSeasonal(K=K)

    params, score = grid_search(factory, {"K": [99, 1]}, s, plan)
    assert params == {"K": 1} and score == 1.0
