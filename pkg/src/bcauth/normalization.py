"""Threshold normalization: matcher outputs to the four fused booleans.

Boundary semantics: the finger comparison is strict (``score < T``, a
false-match scale where lower is better); face, gender and age are inclusive
(``value >= T``, similarity scales).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from bcauth.biosim import DemographicEstimate, UserProfile
from bcauth.biosim.simulator import MAXINT
from bcauth.errors import MemoryLimitLookupError, PolicyValidationError, ScoreRangeError


@dataclass(frozen=True)
class ThresholdPolicy:
    """The predefined comparison thresholds plus the confidence gate.

    ``face_memory_limit_mb`` is informational: it selects the documented FAR
    column and plays no role in the decision path.
    """

    finger_threshold: int = 21_474
    face_threshold: float = 0.992
    gender_threshold: float = 0.9
    age_tolerance: int = 10
    face_memory_limit_mb: int = 1024
    confidence_gate: float = 80.0

    def __post_init__(self) -> None:
        errors: dict[str, str] = {}
        if not (0 < self.finger_threshold < MAXINT):
            errors["finger_threshold"] = f"must be in (0, {MAXINT}), got {self.finger_threshold}"
        if not (0.0 < self.face_threshold < 1.0):
            errors["face_threshold"] = f"must be in (0, 1), got {self.face_threshold}"
        if not (0.5 <= self.gender_threshold <= 1.0):
            errors["gender_threshold"] = f"must be in [0.5, 1], got {self.gender_threshold}"
        if self.age_tolerance < 0:
            errors["age_tolerance"] = f"must be >= 0, got {self.age_tolerance}"
        if self.face_memory_limit_mb <= 0:
            errors["face_memory_limit_mb"] = f"must be positive, got {self.face_memory_limit_mb}"
        if not (0.0 <= self.confidence_gate <= 100.0):
            errors["confidence_gate"] = f"must be in [0, 100], got {self.confidence_gate}"
        if errors:
            raise PolicyValidationError(errors)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdPolicy":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ThresholdPolicy":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ModalityVector:
    """The four normalized booleans consumed by fusion."""

    finger: bool
    face: bool
    gender: bool
    age: bool

    def as_tuple(self) -> tuple[bool, bool, bool, bool]:
        return (self.finger, self.face, self.gender, self.age)

    def to_dict(self) -> dict:
        return {"finger": self.finger, "face": self.face, "gender": self.gender, "age": self.age}


def normalize_finger(score: int, policy: ThresholdPolicy) -> bool:
    if not (0 <= score < MAXINT):
        raise ScoreRangeError(f"finger score {score} outside [0, {MAXINT})")
    return score < policy.finger_threshold


def normalize_face(similarity: float, policy: ThresholdPolicy) -> bool:
    if not (0.0 <= similarity <= 1.0):
        raise ScoreRangeError(f"face similarity {similarity} outside [0, 1]")
    return similarity >= policy.face_threshold


def normalize_gender(
    est: DemographicEstimate, profile: UserProfile, policy: ThresholdPolicy
) -> bool:
    return est.prob_for(profile.declared_gender) >= policy.gender_threshold


def normalize_age(
    est: DemographicEstimate, profile: UserProfile, policy: ThresholdPolicy
) -> bool:
    return abs(est.age_estimate - profile.declared_age) <= policy.age_tolerance


def normalize(
    finger_score: int,
    face_similarity: float,
    est: DemographicEstimate,
    profile: UserProfile,
    policy: ThresholdPolicy,
) -> ModalityVector:
    """Apply all four threshold comparisons in one step."""
    return ModalityVector(
        finger=normalize_finger(finger_score, policy),
        face=normalize_face(face_similarity, policy),
        gender=normalize_gender(est, profile, policy),
        age=normalize_age(est, profile, policy),
    )


def expected_fpir(finger_threshold: int) -> float:
    """Analytic false-positive identification rate under the uniform impostor
    model: threshold / MAXINT."""
    if not (0 <= finger_threshold < MAXINT):
        raise ScoreRangeError(f"finger threshold {finger_threshold} outside [0, {MAXINT})")
    return finger_threshold / MAXINT


# Documented facial FAR per (threshold row, memory-limit column), reproduced
# verbatim from the vendor characterization. The 0.988849 row breaks the
# ascending order (almost certainly a typo for 0.998849) but is kept as
# published. Informational only: not used in the decision path.
FACE_FAR_MEMORY_COLUMNS = (350, 700, 1750, 3500, 5250, 7500)
FACE_FAR_TABLE: tuple[tuple[float, tuple[float, ...]], ...] = (
    (0.992000, (0.000041, 0.000114, 0.000703, 0.001287, 0.001938, 0.002475)),
    (0.993141, (0.000035, 0.000104, 0.000519, 0.001099, 0.001744, 0.002010)),
    (0.994283, (0.000031, 0.000095, 0.000462, 0.000882, 0.001377, 0.001574)),
    (0.995424, (0.000013, 0.000054, 0.000304, 0.000646, 0.000953, 0.001212)),
    (0.996566, (0.000013, 0.000045, 0.000211, 0.000458, 0.000700, 0.000812)),
    (0.997707, (0.000009, 0.000038, 0.000146, 0.000314, 0.000435, 0.000566)),
    (0.988849, (0.000006, 0.000006, 0.000066, 0.000161, 0.000276, 0.000327)),
    (0.999990, (0.000000, 0.000003, 0.000000, 0.000003, 0.000013, 0.000022)),
)


def documented_far(face_threshold: float, memory_limit_mb: int) -> float:
    """Nearest-row / exact-column lookup into the documented FAR table."""
    if memory_limit_mb not in FACE_FAR_MEMORY_COLUMNS:
        raise MemoryLimitLookupError(
            f"memory limit {memory_limit_mb} is not a documented column "
            f"{FACE_FAR_MEMORY_COLUMNS}"
        )
    col = FACE_FAR_MEMORY_COLUMNS.index(memory_limit_mb)
    row = min(FACE_FAR_TABLE, key=lambda r: abs(r[0] - face_threshold))
    return row[1][col]
