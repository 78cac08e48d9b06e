"""Accuracy bookkeeping and the ratio metrics used by the benchmark.

Accuracy is reported three ways: plain overall accuracy, support-weighted
recall (the headline number, which coincides with overall accuracy by
construction), and balanced accuracy (unweighted mean recall per class).
The ratio metrics compare a sampled-training run against the full-training
baseline: relative accuracy, feature-extraction speedup, and training
speedup.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Protocol

from .errors import EvaluationError, UndefinedRatioError
from .features import FeatureRow


class SequencePredictor(Protocol):
    def predict(self, prefix) -> tuple[str, dict[str, float]]: ...


@dataclass(frozen=True)
class ClassTally:
    support: int
    correct: int

    @property
    def recall(self) -> float:
        return self.correct / self.support if self.support else 0.0


@dataclass(frozen=True)
class EvaluationResult:
    """Per-class tallies plus the three accuracy summaries."""

    per_class: dict[str, ClassTally]
    overall_accuracy: float
    weighted_accuracy: float
    balanced_accuracy: float
    n: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "overall_accuracy": self.overall_accuracy,
            "weighted_accuracy": self.weighted_accuracy,
            "balanced_accuracy": self.balanced_accuracy,
            "per_class": {
                label: {"support": t.support, "correct": t.correct}
                for label, t in self.per_class.items()
            },
        }


def evaluate(model: SequencePredictor, test_rows: Iterable[FeatureRow]) -> EvaluationResult:
    """Score a predictor on test rows.

    Targets never seen in training simply form their own class with zero
    correct predictions.
    """
    counts: dict[str, list[int]] = {}
    n = 0
    for row in test_rows:
        n += 1
        predicted, _ = model.predict(row.prefix)
        tally = counts.setdefault(row.target, [0, 0])
        tally[0] += 1
        if predicted == row.target:
            tally[1] += 1
    if n == 0:
        raise EvaluationError("cannot evaluate on an empty test set")

    per_class = {label: ClassTally(s, c) for label, (s, c) in sorted(counts.items())}
    overall = sum(t.correct for t in per_class.values()) / n
    weighted = sum((t.support / n) * t.recall for t in per_class.values())
    balanced = sum(t.recall for t in per_class.values()) / len(per_class)
    return EvaluationResult(per_class, overall, weighted, balanced, n)


def relative_accuracy(sampled: float, full: float) -> float:
    """Accuracy with sampled training data over accuracy with all of it."""
    if full <= 0:
        raise UndefinedRatioError(f"baseline accuracy must be positive, got {full}")
    return sampled / full


def speedup(full_seconds: float, sampled_seconds: float) -> float:
    """How many times faster the sampled run was."""
    if sampled_seconds <= 0:
        raise UndefinedRatioError(
            f"sampled duration must be positive, got {sampled_seconds}"
        )
    return full_seconds / sampled_seconds


@dataclass
class Timing:
    """Wall-clock seconds of the three instrumented phases."""

    feature_extraction_seconds: float = 0.0
    training_seconds: float = 0.0
    sampling_seconds: float = 0.0


@dataclass
class Stopwatch:
    """Monotonic timer wrapping exactly one operation.

    >>> with Stopwatch() as watch:
    ...     work()
    >>> watch.seconds
    """

    seconds: float = 0.0
    _start: float = field(default=0.0, repr=False)

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self.seconds = time.perf_counter() - self._start
