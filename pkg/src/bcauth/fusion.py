"""Decision-level fusion: a from-scratch decision tree over the four
modality booleans plus the per-user smoothed confidence level.

The published 14-row training table is ground truth even where it deviates
from the stated 40/40/10/10 weights; only the two combinations it omits are
filled in by the weighted sum. The tree is trained ID3-style with
information gain, treating each distinct confidence percentage as a class
label, and must reproduce every training row exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from bcauth.errors import TableIntegrityError, TimestampRegressionError, TrainingError
from bcauth.normalization import ModalityVector, ThresholdPolicy

ATTRIBUTES = ("finger", "face", "gender", "age")
WEIGHTS = {"finger": 40.0, "face": 40.0, "gender": 10.0, "age": 10.0}

DEFAULT_ALPHA = 0.3

# (finger, face, gender, age) -> confidence percent, as published
TRAINING_ROWS: tuple[tuple[ModalityVector, float], ...] = tuple(
    (ModalityVector(*flags), conf)
    for flags, conf in (
        ((True, True, True, True), 100.00),
        ((True, True, True, False), 80.00),
        ((True, True, False, True), 80.00),
        ((True, True, False, False), 70.00),
        ((True, False, True, True), 60.00),
        ((True, False, True, False), 50.00),
        ((True, False, False, True), 50.00),
        ((True, False, False, False), 40.00),
        ((False, True, True, True), 60.00),
        ((False, True, True, False), 50.00),
        ((False, True, False, True), 50.00),
        ((False, False, True, True), 20.00),
        ((False, False, False, True), 10.00),
        ((False, False, False, False), 0.00),
    )
)


@dataclass(frozen=True)
class FusionTable:
    rows: tuple[tuple[ModalityVector, float], ...]

    def __post_init__(self) -> None:
        seen = set()
        for vector, confidence in self.rows:
            if vector in seen:
                raise TableIntegrityError(f"duplicate vector {vector.as_tuple()}")
            seen.add(vector)
            if not (0.0 <= confidence <= 100.0):
                raise TableIntegrityError(f"confidence {confidence} outside [0, 100]")

    def lookup(self, vector: ModalityVector) -> float:
        for v, confidence in self.rows:
            if v == vector:
                return confidence
        raise KeyError(vector)

    def to_json(self) -> str:
        return json.dumps(
            [{**v.to_dict(), "confidence": c} for v, c in self.rows], indent=2
        )


def weighted_confidence(vector: ModalityVector) -> float:
    return sum(WEIGHTS[a] for a in ATTRIBUTES if getattr(vector, a))


def complete_table(published_rows=TRAINING_ROWS) -> FusionTable:
    """Extend the published rows to all 16 vectors via the weighted sum."""
    rows = list(published_rows)
    known = {v for v, _ in rows}
    if len(known) != len(rows):
        raise TableIntegrityError("duplicate vectors in training rows")
    for bits in range(16):
        vector = ModalityVector(
            finger=bool(bits & 8), face=bool(bits & 4),
            gender=bool(bits & 2), age=bool(bits & 1),
        )
        if vector not in known:
            rows.append((vector, weighted_confidence(vector)))
    rows.sort(key=lambda r: tuple(not b for b in r[0].as_tuple()))
    return FusionTable(rows=tuple(rows))


# --- decision tree ---------------------------------------------------------------


@dataclass(frozen=True)
class _Node:
    attribute: str | None = None
    low: "_Node | None" = None    # attribute is False
    high: "_Node | None" = None   # attribute is True
    confidence: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.confidence is not None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"confidence": self.confidence}
        return {
            "attribute": self.attribute,
            "false": self.low.to_dict(),
            "true": self.high.to_dict(),
        }


@dataclass(frozen=True)
class FusionModel:
    root: _Node
    depth: int

    def confidence_for(self, vector: ModalityVector) -> float:
        node = self.root
        while not node.is_leaf:
            node = node.high if getattr(vector, node.attribute) else node.low
        return node.confidence

    def to_json(self) -> str:
        return json.dumps({"depth": self.depth, "tree": self.root.to_dict()}, indent=2)


def _entropy(labels: list[float]) -> float:
    counts = Counter(labels)
    n = len(labels)
    return -sum((c / n) * math.log2(c / n) for c in counts.values())


def _grow(rows: list[tuple[ModalityVector, float]], remaining: tuple[str, ...]) -> _Node:
    labels = [c for _, c in rows]
    if len(set(labels)) == 1:
        return _Node(confidence=labels[0])
    base = _entropy(labels)
    best_attr = None
    best_gain = -1.0
    for attr in remaining:  # fixed order breaks ties deterministically
        low = [c for v, c in rows if not getattr(v, attr)]
        high = [c for v, c in rows if getattr(v, attr)]
        if not low or not high:
            continue
        split = (len(low) * _entropy(low) + len(high) * _entropy(high)) / len(rows)
        gain = base - split
        if gain > best_gain + 1e-12:
            best_gain = gain
            best_attr = attr
    if best_attr is None:
        # identical vectors with conflicting labels cannot occur in a valid table
        raise TrainingError("no informative split available")
    rest = tuple(a for a in remaining if a != best_attr)
    low_rows = [(v, c) for v, c in rows if not getattr(v, best_attr)]
    high_rows = [(v, c) for v, c in rows if getattr(v, best_attr)]
    return _Node(attribute=best_attr, low=_grow(low_rows, rest), high=_grow(high_rows, rest))


def _depth(node: _Node) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(_depth(node.low), _depth(node.high))


def train(table: FusionTable) -> FusionModel:
    """Fit the tree on a complete 16-row table; training error must be zero."""
    if len(table.rows) != 16:
        raise TrainingError(f"training table must have 16 rows, got {len(table.rows)}")
    root = _grow(list(table.rows), ATTRIBUTES)
    model = FusionModel(root=root, depth=_depth(root))
    for vector, confidence in table.rows:
        got = model.confidence_for(vector)
        if got != confidence:
            raise TrainingError(
                f"nonzero training error at {vector.as_tuple()}: {got} != {confidence}"
            )
    return model


def infer(model: FusionModel, vector: ModalityVector) -> float:
    """Leaf confidence percentage for a modality vector."""
    return model.confidence_for(vector)


# --- confidence level --------------------------------------------------------------


@dataclass(frozen=True)
class ConfidenceUpdate:
    timestamp: float
    vector: ModalityVector
    fused: float
    level: float


@dataclass(frozen=True)
class ConfidenceRecord:
    """Per-user smoothed confidence level with its transaction history.

    A record with empty history is fresh: its level is unset until the first
    fused value arrives.
    """

    user_id: str
    level: float | None = None
    history: tuple[ConfidenceUpdate, ...] = field(default_factory=tuple)

    @classmethod
    def fresh(cls, user_id: str) -> "ConfidenceRecord":
        return cls(user_id=user_id)


def update_confidence(
    record: ConfidenceRecord,
    fused: float,
    vector: ModalityVector,
    now: float,
    alpha: float = DEFAULT_ALPHA,
) -> ConfidenceRecord:
    """Exponential moving average; the first fused value seeds the level."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha {alpha} outside (0, 1]")
    if not (0.0 <= fused <= 100.0):
        raise ValueError(f"fused value {fused} outside [0, 100]")
    if record.history and now < record.history[-1].timestamp:
        raise TimestampRegressionError(
            f"timestamp {now} precedes last update {record.history[-1].timestamp}"
        )
    if record.history:
        level = (1.0 - alpha) * record.level + alpha * fused
    else:
        level = fused
    update = ConfidenceUpdate(timestamp=now, vector=vector, fused=fused, level=level)
    return ConfidenceRecord(
        user_id=record.user_id, level=level, history=record.history + (update,)
    )


def decide_access(level: float, policy: ThresholdPolicy) -> bool:
    """Inclusive gate: a level exactly at the threshold passes."""
    if not (0.0 <= level <= 100.0):
        raise ValueError(f"level {level} outside [0, 100]")
    return level >= policy.confidence_gate


def history_csv(record: ConfidenceRecord) -> str:
    """History rows as CSV: timestamp, the four booleans, fused, level."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["timestamp", "finger", "face", "gender", "age", "fused", "level"])
    for u in record.history:
        writer.writerow(
            [
                f"{u.timestamp:.3f}",
                int(u.vector.finger),
                int(u.vector.face),
                int(u.vector.gender),
                int(u.vector.age),
                f"{u.fused:.4f}",
                f"{u.level:.4f}",
            ]
        )
    return out.getvalue()
