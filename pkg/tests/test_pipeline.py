"""Decompose-train-recombine pipeline: variants, exactness, causality."""
import warnings

import numpy as np
import pytest

from megazord.data import SplitSeries, UnivariateSeries, holdout_split
from megazord.errors import (
    ConstantComponent,
    ModelSeriesMismatch,
    SeriesTooShort,
)
from megazord.nn import TrainConfig
from megazord.pipeline import (
    VARIANT_LABELS,
    VariantSpec,
    all_variants,
    fit,
    forecast_test,
)

FAST = TrainConfig(epochs=2)


def series_of(values, symbol="T"):
    values = np.asarray(values, dtype=float)
    dates = tuple(f"d{i:04d}" for i in range(len(values)))
    return UnivariateSeries(symbol=symbol, dates=dates, values=values)


def test_variant_catalogue():
    labels = [v.label for v in all_variants()]
    assert labels == ["megazord_ll", "megazord_lc", "megazord_l0",
                      "megazord_cl", "megazord_cc", "megazord_c0"]
    assert VARIANT_LABELS == tuple(labels)


def test_variant_parse_formats():
    assert VariantSpec.parse("megazord_cc") == VariantSpec("cnn", "cnn")
    assert VariantSpec.parse("cc") == VariantSpec("cnn", "cnn")
    assert VariantSpec.parse("C,C") == VariantSpec("cnn", "cnn")
    assert VariantSpec.parse("L0") == VariantSpec("lstm", "none")
    assert VariantSpec.parse(" lc ") == VariantSpec("lstm", "cnn")
    for bad in ("x0", "megazord_0c", "c", "ll0", ""):
        with pytest.raises(ValueError):
            VariantSpec.parse(bad)
    with pytest.raises(ValueError):
        VariantSpec("gru", "cnn")
    with pytest.raises(ValueError):
        VariantSpec("cnn", "sarima")


def test_variant_label_roundtrip():
    for v in all_variants():
        assert VariantSpec.parse(v.label) == v


def test_linear_series_predictions_offset_by_residual():
    # z = 10 + 0.5 t: the causal trailing mean lags by (w-1)/2 steps, so
    # 2.25 rides in the unmodeled residual. Both modeled components
    # degenerate to constants, making the whole pipeline exact:
    # prediction_t = z_t - 2.25.
    t = np.arange(100, dtype=float)
    split = holdout_split(series_of(10.0 + 0.5 * t), 0.8)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConstantComponent)
        model = fit(split.train, VariantSpec.parse("cc"), config=FAST)
    run = forecast_test(model, split)
    np.testing.assert_allclose(run.predictions, split.test.values - 2.25,
                               atol=1e-9)


def test_constant_series_warns_and_predicts_constant():
    split = holdout_split(series_of(np.full(80, 42.0)), 0.8)
    with pytest.warns(ConstantComponent):
        model = fit(split.train, VariantSpec.parse("cl"), config=FAST)
    run = forecast_test(model, split)
    np.testing.assert_allclose(run.predictions, 42.0, atol=1e-9)


def test_seasonal_none_skips_component():
    rng = np.random.default_rng(28)
    split = holdout_split(series_of(np.cumsum(rng.standard_normal(80)) + 100), 0.8)
    model = fit(split.train, VariantSpec.parse("c0"), config=FAST)
    assert model.seasonal is None
    run, comps = forecast_test(model, split, with_components=True)
    np.testing.assert_array_equal(comps["seasonal"], 0.0)
    assert run.method == "megazord_c0"


def test_components_recombine_to_predictions():
    rng = np.random.default_rng(29)
    t = np.arange(90, dtype=float)
    z = 100 + 0.3 * t + 3 * np.sin(2 * np.pi * t / 5) + rng.standard_normal(90)
    split = holdout_split(series_of(z), 0.8)
    model = fit(split.train, VariantSpec.parse("cc"), config=FAST)
    run, comps = forecast_test(model, split, with_components=True)
    recombined = comps["prev_trend"] + comps["trend_delta"] + comps["seasonal"]
    np.testing.assert_allclose(run.predictions, recombined, atol=1e-12)
    assert run.horizon() == len(split.test)
    assert run.pre_test_actual == pytest.approx(split.train.values[-1])


def test_forecasts_are_causal_in_test_actuals():
    # mutating test actual m changes no prediction at steps <= m: inputs
    # for step j are built from observations strictly before its target
    rng = np.random.default_rng(30)
    t = np.arange(100, dtype=float)
    z = 100 + 0.3 * t + 3 * np.sin(2 * np.pi * t / 5) + rng.standard_normal(100)
    split = holdout_split(series_of(z), 0.8)
    model = fit(split.train, VariantSpec.parse("cc"), config=FAST)
    base = forecast_test(model, split)

    m = 7
    mutated_values = split.test.values.copy()
    mutated_values[m] += 50.0
    mutated = SplitSeries(
        train=split.train,
        test=UnivariateSeries(split.test.symbol, split.test.dates, mutated_values),
        fraction=split.fraction)
    shifted = forecast_test(model, mutated)
    np.testing.assert_array_equal(shifted.predictions[:m + 1],
                                  base.predictions[:m + 1])
    assert not np.array_equal(shifted.predictions[m + 1:],
                              base.predictions[m + 1:])


def test_fit_is_deterministic_per_seed():
    rng = np.random.default_rng(31)
    z = np.cumsum(rng.standard_normal(80)) + 100
    split = holdout_split(series_of(z), 0.8)
    runs = []
    for seed in (3, 3, 4):
        model = fit(split.train, VariantSpec.parse("cc"), config=FAST, seed=seed)
        runs.append(forecast_test(model, split).predictions)
    np.testing.assert_array_equal(runs[0], runs[1])
    assert not np.array_equal(runs[0], runs[2])


def test_forecast_rejects_foreign_split():
    rng = np.random.default_rng(32)
    split_a = holdout_split(series_of(np.cumsum(rng.standard_normal(80)) + 100, "A"), 0.8)
    split_b = holdout_split(series_of(np.cumsum(rng.standard_normal(80)) + 100, "B"), 0.8)
    model = fit(split_a.train, VariantSpec.parse("c0"), config=FAST)
    with pytest.raises(ModelSeriesMismatch):
        forecast_test(model, split_b)


def test_fit_needs_window_plus_lookback():
    short = series_of(np.arange(21.0))
    with pytest.raises(SeriesTooShort):
        fit(short, VariantSpec.parse("c0"), config=FAST)


def test_all_variants_produce_finite_forecasts():
    rng = np.random.default_rng(33)
    t = np.arange(80, dtype=float)
    z = 100 + 0.3 * t + 3 * np.sin(2 * np.pi * t / 5) + rng.standard_normal(80)
    split = holdout_split(series_of(z), 0.8)
    for variant in all_variants():
        model = fit(split.train, variant, config=TrainConfig(epochs=1))
        run = forecast_test(model, split)
        assert np.all(np.isfinite(run.predictions)), variant.label
        assert run.method == variant.label
