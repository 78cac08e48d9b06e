"""Prefix-to-next-activity feature rows and fixed-window one-hot encoding.

Each case of length n yields n-1 rows (prefix of length i, activity i+1) and
optionally one extra row targeting the end-of-case marker. Encoding flattens
a prefix into W one-hot blocks over (padding + alphabet), newest activity in
the rightmost block.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EncodingError
from .log_model import EventLog

END_MARKER = "<END>"


@dataclass(frozen=True)
class FeatureRow:
    """One training example: activity prefix and the activity that followed."""

    prefix: tuple[str, ...]
    target: str
    case_id: str

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)


@dataclass(frozen=True, eq=False)
class EncodedRow:
    """One-hot encoded row: W blocks of size len(alphabet)+1, plus a label index."""

    vector: np.ndarray
    label_index: int


def extract_features(log: EventLog, include_end_marker: bool = True) -> list[FeatureRow]:
    """All (prefix, next activity) rows of a log, case by case.

    With the end marker enabled, every full trace additionally predicts
    END_MARKER, so a case of length n contributes n rows instead of n-1.
    """
    rows: list[FeatureRow] = []
    for cid in log.cases:
        trace = log.trace(cid)
        if END_MARKER in trace:
            raise EncodingError(
                f"case {cid!r} uses the reserved end-of-case label {END_MARKER!r}"
            )
        for i in range(1, len(trace)):
            rows.append(FeatureRow(trace[:i], trace[i], cid))
        if include_end_marker:
            rows.append(FeatureRow(trace, END_MARKER, cid))
    return rows


def label_space(alphabet: Sequence[str]) -> list[str]:
    """Target labels: the alphabet followed by the end-of-case marker."""
    return [*alphabet, END_MARKER]


def encode(
    rows: Iterable[FeatureRow], alphabet: Sequence[str], window: int
) -> list[EncodedRow]:
    """One-hot encode rows against an alphabet with a fixed window length.

    Prefixes longer than the window keep their last ``window`` activities;
    shorter ones are left-padded (slot 0 of each block is the padding slot).
    """
    if window < 1:
        raise EncodingError(f"window must be >= 1, got {window}")
    act_index = {act: i for i, act in enumerate(alphabet)}
    block = len(alphabet) + 1
    labels = {act: i for i, act in enumerate(label_space(alphabet))}

    encoded = []
    for row in rows:
        vector = np.zeros(window * block, dtype=np.uint8)
        tail = row.prefix[-window:]
        pad = window - len(tail)
        for j in range(pad):
            vector[j * block] = 1
        for j, act in enumerate(tail):
            try:
                slot = act_index[act] + 1
            except KeyError:
                raise EncodingError(f"activity {act!r} is not in the alphabet") from None
            vector[(pad + j) * block + slot] = 1
        try:
            label = labels[row.target]
        except KeyError:
            raise EncodingError(f"target {row.target!r} is not in the alphabet") from None
        encoded.append(EncodedRow(vector, label))
    return encoded


def decode(row: EncodedRow, alphabet: Sequence[str], window: int) -> FeatureRow:
    """Invert :func:`encode` (up to window truncation; case id is lost)."""
    block = len(alphabet) + 1
    prefix = []
    for j in range(window):
        slots = np.flatnonzero(row.vector[j * block : (j + 1) * block])
        if len(slots) != 1:
            raise EncodingError(f"block {j} does not have exactly one hot slot")
        if slots[0] != 0:
            prefix.append(alphabet[slots[0] - 1])
    return FeatureRow(tuple(prefix), label_space(alphabet)[row.label_index], "")


def export_features(
    rows: Iterable[FeatureRow],
    alphabet: Sequence[str],
    window: int,
    path: str | Path,
) -> None:
    """Write encoded rows as CSV: one 0/1 column per slot plus a label column."""
    encoded = encode(rows, alphabet, window)
    header = []
    for j in range(window):
        header.append(f"p{j}_PAD")
        header.extend(f"p{j}_{act}" for act in alphabet)
    header.append("label")
    labels = label_space(alphabet)

    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in encoded:
            writer.writerow([*row.vector.tolist(), labels[row.label_index]])


def default_window(trace_lengths: Sequence[int], percentile: float = 95.0) -> int:
    """Window heuristic: the given percentile (nearest rank) of trace lengths."""
    if not trace_lengths:
        return 1
    ordered = sorted(trace_lengths)
    rank = math.ceil(percentile / 100.0 * len(ordered))
    rank = min(max(rank, 1), len(ordered))
    return max(1, ordered[rank - 1])
