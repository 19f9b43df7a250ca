"""Biometric template types and their canonical byte layout.

Canonical serialization is little-endian counts followed by fields in
declaration order; the same bytes are used for persistence and hashing, so
the layout must stay stable.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum

from bcauth.errors import TemplateShapeError

FACE_FEATURE_LEN = 140  # 70 feature points x 2 normalized coordinates

TWO_PI = 2.0 * math.pi


class MinutiaKind(Enum):
    RIDGE_ENDING = 0
    BIFURCATION = 1


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"


class Modality(str, Enum):
    FINGER = "finger"
    FACE = "face"


class Genuineness(str, Enum):
    """Simulation-only label; never transmitted to servers."""

    GENUINE = "genuine"
    IMPOSTOR = "impostor"
    DEGRADED = "degraded"


@dataclass(frozen=True)
class Minutia:
    x: int
    y: int
    angle: float  # radians in [0, 2*pi)
    kind: MinutiaKind

    def __post_init__(self) -> None:
        if not (0.0 <= self.angle < TWO_PI):
            raise TemplateShapeError(f"minutia angle {self.angle} outside [0, 2*pi)")


@dataclass(frozen=True)
class FingerTemplate:
    """One-way minutiae template; the generating seed is never stored."""

    minutiae: tuple[Minutia, ...]
    extent: tuple[int, int] = (400, 400)

    def __post_init__(self) -> None:
        if not self.minutiae:
            raise TemplateShapeError("finger template must contain minutiae")
        w, h = self.extent
        for m in self.minutiae:
            if not (0 <= m.x < w and 0 <= m.y < h):
                raise TemplateShapeError(
                    f"minutia ({m.x}, {m.y}) outside extent {self.extent}"
                )

    def to_bytes(self) -> bytes:
        parts = [struct.pack("<HHI", self.extent[0], self.extent[1], len(self.minutiae))]
        for m in self.minutiae:
            parts.append(struct.pack("<iidB", m.x, m.y, m.angle, m.kind.value))
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "FingerTemplate":
        try:
            w, h, n = struct.unpack_from("<HHI", data, 0)
            off = 8
            minutiae = []
            for _ in range(n):
                x, y, angle, kind = struct.unpack_from("<iidB", data, off)
                off += 17
                minutiae.append(Minutia(x, y, angle, MinutiaKind(kind)))
            if off != len(data):
                raise ValueError("trailing bytes")
        except (struct.error, ValueError) as exc:
            raise TemplateShapeError(f"malformed finger template bytes: {exc}") from exc
        return cls(minutiae=tuple(minutiae), extent=(w, h))


@dataclass(frozen=True)
class FaceTemplate:
    """Fixed-length facial feature-point vector in normalized coordinates."""

    features: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.features) != FACE_FEATURE_LEN:
            raise TemplateShapeError(
                f"face template must have {FACE_FEATURE_LEN} components, "
                f"got {len(self.features)}"
            )
        for v in self.features:
            if not math.isfinite(v) or not (0.0 <= v <= 1.0):
                raise TemplateShapeError(f"face feature {v} outside [0, 1]")

    def to_bytes(self) -> bytes:
        return struct.pack("<I", len(self.features)) + struct.pack(
            f"<{len(self.features)}d", *self.features
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "FaceTemplate":
        try:
            (n,) = struct.unpack_from("<I", data, 0)
            if n != FACE_FEATURE_LEN or len(data) != 4 + 8 * n:
                raise ValueError("bad length")
            features = struct.unpack_from(f"<{n}d", data, 4)
        except (struct.error, ValueError) as exc:
            raise TemplateShapeError(f"malformed face template bytes: {exc}") from exc
        return cls(features=tuple(features))


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    name: str
    privileges: tuple[str, ...]
    declared_gender: Gender
    declared_age: int

    def __post_init__(self) -> None:
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if not (1 <= self.declared_age <= 120):
            raise ValueError(f"declared_age {self.declared_age} outside [1, 120]")


@dataclass(frozen=True)
class ProbeSample:
    """A fresh capture plus simulation metadata.

    ``genuineness`` and ``noise_level`` steer generation only; servers see
    just the payload template.
    """

    modality: Modality
    payload: FingerTemplate | FaceTemplate
    genuineness: Genuineness
    noise_level: float = 0.0

    def __post_init__(self) -> None:
        expected = FingerTemplate if self.modality is Modality.FINGER else FaceTemplate
        if not isinstance(self.payload, expected):
            raise TemplateShapeError(
                f"{self.modality.value} probe carries {type(self.payload).__name__}"
            )
        if not (0.0 <= self.noise_level <= 1.0):
            raise ValueError(f"noise_level {self.noise_level} outside [0, 1]")


@dataclass(frozen=True)
class DemographicEstimate:
    male_prob: float
    female_prob: float
    age_estimate: int

    def __post_init__(self) -> None:
        if abs(self.male_prob + self.female_prob - 1.0) > 1e-9:
            raise ValueError("gender probabilities must sum to 1")
        if not (0.0 <= self.male_prob <= 1.0 and 0.0 <= self.female_prob <= 1.0):
            raise ValueError("gender probabilities outside [0, 1]")
        if not (1 <= self.age_estimate <= 120):
            raise ValueError(f"age_estimate {self.age_estimate} outside [1, 120]")

    def prob_for(self, gender: Gender) -> float:
        return self.male_prob if gender is Gender.MALE else self.female_prob
