"""Trace ranking and variant-aware case selection.

Selection works per variant: rank the variant's traces by how well they
represent it (or by arrival time, or randomly), then keep the top slice whose
size comes from the configured selection distribution. The "random" method
ignores variants and draws a fraction of all cases instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random

from .errors import ConfigurationError, EmptySampleError
from .log_model import CASE_SCOPE, EventLog, subset_log
from .variants import SimpleLog, Variant, VariantIndex

UNIQUE = "unique"
LOGARITHMIC = "log"
DIVISION = "div"
RANDOM = "random"
_METHODS = (UNIQUE, LOGARITHMIC, DIVISION, RANDOM)

REPRESENTATIVE = "representative"
OLDEST_FIRST = "oldest-first"
NEWEST_FIRST = "newest-first"
RANDOM_ORDER = "random"
_SORTINGS = (REPRESENTATIVE, OLDEST_FIRST, NEWEST_FIRST, RANDOM_ORDER)

FLOOR = "floor"
NEAREST = "nearest"


@dataclass(frozen=True)
class SamplingConfig:
    """How many traces to keep per variant, and which ones.

    method: unique | log | div | random. ``k`` (>= 2) parametrises log and
    div; ``fraction`` in (0, 1] parametrises random. ``log_rounding`` picks
    floor (default) or nearest-integer rounding of the logarithm.
    """

    method: str
    k: int | None = None
    fraction: float | None = None
    sorting: str = REPRESENTATIVE
    seed: int = 0
    log_rounding: str = FLOOR

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ConfigurationError(f"unknown selection method {self.method!r}")
        if self.sorting not in _SORTINGS:
            raise ConfigurationError(f"unknown sorting strategy {self.sorting!r}")
        if self.log_rounding not in (FLOOR, NEAREST):
            raise ConfigurationError(f"unknown log rounding {self.log_rounding!r}")
        if self.method in (LOGARITHMIC, DIVISION):
            if self.k is None or self.k < 2:
                raise ConfigurationError(f"{self.method} selection needs k >= 2, got {self.k}")
        if self.method == RANDOM:
            if self.fraction is None or not (0.0 < self.fraction <= 1.0):
                raise ConfigurationError(
                    f"random selection needs a fraction in (0, 1], got {self.fraction}"
                )

    @property
    def label(self) -> str:
        """Short token for reports: unique, d10, log2, random:0.5."""
        if self.method == DIVISION:
            return f"d{self.k}"
        if self.method == LOGARITHMIC:
            return f"log{self.k}"
        if self.method == RANDOM:
            return f"random:{self.fraction:g}"
        return self.method


@dataclass(frozen=True)
class SampleReport:
    """Outcome of one sampling run."""

    original_cases: int
    sampled_cases: int
    original_variants: int
    sampled_variants: int
    reduction_rate: float
    per_variant: tuple[tuple[tuple[str, ...], int, int], ...]  # (variant, kept, total)
    variant_preserving: bool

    def to_dict(self) -> dict:
        return {
            "original_cases": self.original_cases,
            "sampled_cases": self.sampled_cases,
            "original_variants": self.original_variants,
            "sampled_variants": self.sampled_variants,
            "reduction_rate": self.reduction_rate,
            "variant_preserving": self.variant_preserving,
            "per_variant": [
                {"variant": list(seq), "kept": kept, "total": total}
                for seq, kept, total in self.per_variant
            ],
        }


def _floor_log(n: int, k: int) -> int:
    """Largest e with k**e <= n, in exact integer arithmetic."""
    e = 0
    power = k
    while power <= n:
        e += 1
        power *= k
    return e


def _nearest_log(n: int, k: int) -> int:
    # round log_k(n) to the nearest integer; geometric midpoint comparison
    # keeps the decision exact (ties round up)
    e = _floor_log(n, k)
    return e + 1 if n * n >= k ** (2 * e + 1) else e


def sample_count(config: SamplingConfig, frequency: int) -> int:
    """Number of traces to keep from a variant with the given frequency."""
    if frequency < 1:
        raise ValueError(f"frequency must be >= 1, got {frequency}")
    if config.method == UNIQUE:
        return 1
    if config.method == DIVISION:
        return (frequency + config.k - 1) // config.k
    if config.method == LOGARITHMIC:
        if config.log_rounding == NEAREST:
            count = _nearest_log(frequency, config.k)
        else:
            count = _floor_log(frequency, config.k)
        return min(count, frequency)
    raise ConfigurationError("random selection has no per-variant count")


def _representative_score(
    case_id: str, index: VariantIndex, variant: Variant
) -> int:
    """How many of the case's attribute observations hit a modal value."""
    log = index.source_log
    summaries = index.distributions[variant.activities]
    score = 0
    for name in index.attributes:
        modal = summaries[name].modal_values
        if not modal:
            continue
        spec = log.attribute_schema[name]
        if spec.scope == CASE_SCOPE:
            if log.cases[case_id].attributes.get(name) in modal:
                score += 1
        else:
            for ev in log.case_events(case_id):
                if ev.attributes.get(name) in modal:
                    score += 1
    return score


def rank_traces(
    variant: Variant, index: VariantIndex, sorting: str, seed: int = 0
) -> list[str]:
    """Order a variant's case ids from highest to lowest keep priority.

    Every strategy is deterministic for a given (log, sorting, seed) and
    independent of the input ordering of the member list.
    """
    if sorting == REPRESENTATIVE:
        if not index.attributes:
            raise ConfigurationError(
                "representative sorting needs an index built with attributes"
            )
        return sorted(
            variant.member_case_ids,
            key=lambda cid: (-_representative_score(cid, index, variant), cid),
        )
    if sorting in (OLDEST_FIRST, NEWEST_FIRST):
        log = index.source_log
        ids = sorted(variant.member_case_ids)
        return sorted(ids, key=log.case_start, reverse=sorting == NEWEST_FIRST)
    if sorting == RANDOM_ORDER:
        rnd = Random(f"{seed}|rank|" + "\x1f".join(variant.activities))
        ids = sorted(variant.member_case_ids)
        rnd.shuffle(ids)
        return ids
    raise ConfigurationError(f"unknown sorting strategy {sorting!r}")


def sample(
    log: EventLog, index: VariantIndex, config: SamplingConfig
) -> tuple[EventLog, SampleReport]:
    """Select cases per the config and return the sub-log plus a report.

    Kept cases are carried over untouched (same events, same attribute
    values). Raises EmptySampleError when the configuration keeps nothing.
    """
    if index.source_log is not log:
        raise ConfigurationError("the variant index was built from a different log")
    if config.method == RANDOM:
        n_keep = math.ceil(config.fraction * log.num_cases)
        rnd = Random(f"{config.seed}|random-selection")
        kept_ids = set(rnd.sample(sorted(log.cases), n_keep))
    else:
        kept_ids = set()
        for variant in index.variants:
            count = sample_count(config, variant.frequency)
            if count == 0:
                continue
            ranked = rank_traces(variant, index, config.sorting, config.seed)
            kept_ids.update(ranked[:count])

    if not kept_ids:
        raise EmptySampleError(
            f"sampling with {config.label} keeps zero cases; "
            "every variant is below the selection threshold"
        )

    sampled = subset_log(log, kept_ids)

    per_variant = []
    kept_variants = 0
    for variant in index.variants:
        kept = sum(1 for cid in variant.member_case_ids if cid in kept_ids)
        if kept:
            kept_variants += 1
        per_variant.append((variant.activities, kept, variant.frequency))

    report = SampleReport(
        original_cases=log.num_cases,
        sampled_cases=sampled.num_cases,
        original_variants=len(index.variants),
        sampled_variants=kept_variants,
        reduction_rate=log.num_cases / sampled.num_cases,
        per_variant=tuple(per_variant),
        variant_preserving=kept_variants == len(index.variants),
    )
    return sampled, report


def is_variant_preserving(original: SimpleLog, sampled: SimpleLog) -> bool:
    """True iff both logs contain exactly the same set of unique variants."""
    return original.unique_variants == sampled.unique_variants


def parse_method_token(token: str, sorting: str = RANDOM_ORDER, seed: int = 0) -> SamplingConfig:
    """Parse a grid token like d10, log2, unique, or random:0.5."""
    token = token.strip()
    if token == UNIQUE:
        return SamplingConfig(UNIQUE, sorting=sorting, seed=seed)
    if token.startswith("d") and token[1:].isdigit():
        return SamplingConfig(DIVISION, k=int(token[1:]), sorting=sorting, seed=seed)
    if token.startswith("log") and token[3:].isdigit():
        return SamplingConfig(LOGARITHMIC, k=int(token[3:]), sorting=sorting, seed=seed)
    if token == RANDOM or token.startswith("random:"):
        fraction = 1.0 if token == RANDOM else float(token.split(":", 1)[1])
        return SamplingConfig(RANDOM, fraction=fraction, sorting=sorting, seed=seed)
    raise ConfigurationError(f"cannot parse sampling method token {token!r}")
