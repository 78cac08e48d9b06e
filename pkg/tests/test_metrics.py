"""Accuracy tallies and ratio metrics."""

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logsample.errors import EvaluationError, UndefinedRatioError
from logsample.features import FeatureRow
from logsample.metrics import Stopwatch, evaluate, relative_accuracy, speedup


class FixedPredictor:
    """Predicts a constant label, whatever the prefix."""

    def __init__(self, label):
        self.label = label

    def predict(self, prefix):
        return self.label, {self.label: 1.0}


def rows(target_sequence):
    return [FeatureRow(("a",), t, f"c{i}") for i, t in enumerate(target_sequence)]


class TestEvaluate:
    def test_all_correct(self):
        result = evaluate(FixedPredictor("b"), rows(["b"] * 10))
        assert result.overall_accuracy == 1.0
        assert result.weighted_accuracy == 1.0
        assert result.balanced_accuracy == 1.0
        assert result.n == 10

    def test_skewed_classes(self):
        result = evaluate(FixedPredictor("b"), rows(["b"] * 9 + ["c"]))
        assert result.overall_accuracy == pytest.approx(0.9)
        assert result.weighted_accuracy == pytest.approx(0.9)
        assert result.balanced_accuracy == pytest.approx(0.5)
        assert result.per_class["b"].support == 9
        assert result.per_class["c"].correct == 0

    def test_all_wrong(self):
        result = evaluate(FixedPredictor("x"), rows(["b", "c"]))
        assert result.overall_accuracy == 0.0
        assert result.weighted_accuracy == 0.0
        assert result.balanced_accuracy == 0.0

    def test_empty_test_set(self):
        with pytest.raises(EvaluationError):
            evaluate(FixedPredictor("b"), [])

    def test_supports_sum_to_n(self):
        result = evaluate(FixedPredictor("b"), rows(["b", "c", "c", "d"]))
        assert sum(t.support for t in result.per_class.values()) == result.n

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=40))
    def test_weighted_equals_overall(self, targets):
        result = evaluate(FixedPredictor("a"), rows(targets))
        assert result.weighted_accuracy == pytest.approx(result.overall_accuracy, abs=1e-12)


class TestRatios:
    def test_relative_accuracy_identity(self):
        assert relative_accuracy(0.791, 0.791) == 1.0

    def test_relative_accuracy_improvement(self):
        assert relative_accuracy(0.814 * 1.004, 0.814) == pytest.approx(1.004)

    def test_relative_accuracy_half(self):
        assert relative_accuracy(0.5, 1.0) == 0.5

    def test_relative_accuracy_zero_baseline(self):
        with pytest.raises(UndefinedRatioError):
            relative_accuracy(0.5, 0.0)

    def test_speedup(self):
        assert speedup(100.0, 10.0) == 10.0
        assert speedup(5.0, 5.0) == 1.0

    def test_speedup_zero_denominator(self):
        with pytest.raises(UndefinedRatioError):
            speedup(10.0, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=1e-6, max_value=1e6),
        st.floats(min_value=1e-6, max_value=1e6),
        st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_scale_invariance(self, numerator, denominator, scale):
        base = speedup(numerator, denominator)
        scaled = speedup(numerator * scale, denominator * scale)
        assert scaled == pytest.approx(base, rel=1e-9)


class TestStopwatch:
    def test_measures_only_the_wrapped_block(self):
        with Stopwatch() as outer:
            time.sleep(0.02)
        with Stopwatch() as inner:
            pass
        assert outer.seconds >= 0.015
        assert inner.seconds < outer.seconds
