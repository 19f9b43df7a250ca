"""Parametric synthetic matcher and probe generator.

The matcher is a pure function of its inputs: every stochastic quantity is
derived from a SHA-256 pseudo-random function over the canonical template
bytes, so identical inputs always yield identical scores.

Score model
-----------
Finger scores live on the false-match-probability scale where a match means
``score < T`` and MAXINT = 2**31 - 1. A probe related to an enrolled
template (same finger, small capture jitter) scores in a low tail
(``q * MAXINT`` with ``q < genuine_q_max``); an unrelated probe scores
uniformly on ``[0, MAXINT)``, which makes the threshold/FPIR relation
``P(score < T) = T / MAXINT`` exact by construction. The unrelated draw is
shared across the enrolled set so that taking the best (minimum) score over
four scans of one finger keeps the impostor score uniform.

Face similarity is computed from the feature vectors (higher = more
similar); probe generation crafts vectors at a target similarity drawn from
the configured genuine/impostor/degraded distributions, so those
distributions hold exactly at match time.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import struct
from dataclasses import dataclass

import numpy as np

from bcauth.biosim.templates import (
    FACE_FEATURE_LEN,
    TWO_PI,
    DemographicEstimate,
    FaceTemplate,
    FingerTemplate,
    Gender,
    Genuineness,
    Minutia,
    MinutiaKind,
    Modality,
    ProbeSample,
    UserProfile,
)
from bcauth.errors import EnrollmentArityError, NoTemplateError, TemplateShapeError

MAXINT = 2_147_483_647


@dataclass(frozen=True)
class SimConfig:
    """Distribution parameters for the synthetic matchers (JSON-serializable)."""

    # fingerprint generation and matching
    minutiae_count: int = 32
    image_extent: tuple[int, int] = (400, 400)
    position_margin: int = 32
    scan_jitter_px: float = 1.5
    scan_jitter_angle: float = 0.05
    probe_jitter_px: float = 2.0
    probe_jitter_angle: float = 0.05
    knockout_px: float = 24.0
    match_tol_px: float = 8.0
    match_tol_angle: float = 0.3
    overlap_related_min: float = 0.5
    genuine_q_max: float = 1e-7

    # face similarity
    face_gain: float = 2.0
    genuine_sim_min: float = 0.992
    genuine_sim_noise_span: float = 0.05
    degraded_sim_low: float = 0.95
    degraded_sim_high: float = 0.997
    impostor_sim_low: float = 0.2
    impostor_face_tail: float = 2e-6

    # demographic estimation
    gender_floor: float = 1e-4
    age_base_error: float = 2.0
    age_noise_error_span: float = 48.0

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["image_extent"] = list(self.image_extent)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        kwargs = dict(d)
        if "image_extent" in kwargs:
            kwargs["image_extent"] = tuple(kwargs["image_extent"])
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        return cls.from_dict(json.loads(text))


DEFAULT_CONFIG = SimConfig()


# --- deterministic randomness ------------------------------------------------


def _seed_bytes(seed) -> bytes:
    if isinstance(seed, bytes):
        return seed
    if isinstance(seed, str):
        return seed.encode("utf-8")
    if isinstance(seed, int):
        return seed.to_bytes(16, "little", signed=True)
    raise TypeError(f"unsupported seed type {type(seed).__name__}")


def _prf(*parts: bytes) -> bytes:
    h = hashlib.sha256()
    for p in parts:
        h.update(struct.pack("<I", len(p)))
        h.update(p)
    return h.digest()


def _prf_u64(*parts: bytes) -> int:
    return int.from_bytes(_prf(*parts)[:8], "little")


def _prf_unit(*parts: bytes) -> float:
    return _prf_u64(*parts) / 2.0**64


def _rng_from(*parts: bytes) -> np.random.Generator:
    return np.random.default_rng(_prf_u64(*parts))


# --- fingerprint templates ----------------------------------------------------


def _base_minutiae(seed, config: SimConfig) -> list[Minutia]:
    rng = _rng_from(b"finger-base", _seed_bytes(seed))
    w, h = config.image_extent
    m = config.position_margin
    out = []
    for _ in range(config.minutiae_count):
        x = int(rng.integers(m, w - m))
        y = int(rng.integers(m, h - m))
        angle = float(rng.random() * TWO_PI)
        kind = MinutiaKind.BIFURCATION if rng.random() < 0.5 else MinutiaKind.RIDGE_ENDING
        out.append(Minutia(x, y, angle, kind))
    return out


def _jitter_minutia(
    m: Minutia, rng: np.random.Generator, radius: float, angle_jitter: float,
    extent: tuple[int, int],
) -> Minutia:
    theta = rng.random() * TWO_PI
    r = rng.random() * radius
    x = int(round(m.x + r * math.cos(theta)))
    y = int(round(m.y + r * math.sin(theta)))
    x = min(max(x, 0), extent[0] - 1)
    y = min(max(y, 0), extent[1] - 1)
    angle = (m.angle + (rng.random() * 2.0 - 1.0) * angle_jitter) % TWO_PI
    return Minutia(x, y, angle, m.kind)


def enroll_finger(
    scan_seeds, profile: UserProfile, config: SimConfig = DEFAULT_CONFIG
) -> list[FingerTemplate]:
    """Produce the four enrollment templates for one finger.

    Each scan derives deterministically from its seed; per-scan capture
    jitter is keyed by the scan index, so four identical seeds with nonzero
    jitter still model four distinct scans of the same finger.
    """
    seeds = list(scan_seeds)
    if len(seeds) != 4:
        raise EnrollmentArityError(
            f"enrollment requires exactly 4 finger scans, got {len(seeds)}"
        )
    templates = []
    for i, seed in enumerate(seeds):
        base = _base_minutiae(seed, config)
        rng = _rng_from(b"finger-scan", _seed_bytes(seed), struct.pack("<I", i))
        minutiae = tuple(
            _jitter_minutia(
                m, rng, config.scan_jitter_px, config.scan_jitter_angle,
                config.image_extent,
            )
            for m in base
        )
        templates.append(FingerTemplate(minutiae=minutiae, extent=config.image_extent))
    return templates


def make_finger_probe(
    user_seed,
    probe_seed,
    genuineness: Genuineness = Genuineness.GENUINE,
    noise_level: float = 0.0,
    config: SimConfig = DEFAULT_CONFIG,
) -> ProbeSample:
    """Generate a fresh finger capture.

    Genuine and degraded probes re-capture the finger identified by
    ``user_seed``; ``noise_level`` is the per-minutia probability of a
    displacement beyond match tolerance. Impostor probes come from an
    unrelated finger derived from ``probe_seed``.
    """
    if not (0.0 <= noise_level <= 1.0):
        raise ValueError(f"noise_level {noise_level} outside [0, 1]")
    if genuineness is Genuineness.IMPOSTOR:
        identity = _prf(b"finger-impostor-identity", _seed_bytes(probe_seed))
        base = _base_minutiae(identity, config)
        template = FingerTemplate(minutiae=tuple(base), extent=config.image_extent)
        return ProbeSample(Modality.FINGER, template, genuineness, noise_level)

    base = _base_minutiae(user_seed, config)
    rng = _rng_from(b"finger-probe", _seed_bytes(user_seed), _seed_bytes(probe_seed))
    minutiae = []
    for m in base:
        if rng.random() < noise_level:
            # displaced beyond match tolerance: this minutia will not pair up
            theta = rng.random() * TWO_PI
            x = int(round(m.x + config.knockout_px * math.cos(theta)))
            y = int(round(m.y + config.knockout_px * math.sin(theta)))
            x = min(max(x, 0), config.image_extent[0] - 1)
            y = min(max(y, 0), config.image_extent[1] - 1)
            minutiae.append(Minutia(x, y, m.angle, m.kind))
        else:
            minutiae.append(
                _jitter_minutia(
                    m, rng, config.probe_jitter_px, config.probe_jitter_angle,
                    config.image_extent,
                )
            )
    template = FingerTemplate(minutiae=tuple(minutiae), extent=config.image_extent)
    return ProbeSample(Modality.FINGER, template, genuineness, noise_level)


def _angular_distance(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _overlap_fraction(
    probe: FingerTemplate, enrolled: FingerTemplate, config: SimConfig
) -> float:
    matched = 0
    for pm in probe.minutiae:
        for em in enrolled.minutiae:
            if pm.kind is not em.kind:
                continue
            if math.hypot(pm.x - em.x, pm.y - em.y) > config.match_tol_px:
                continue
            if _angular_distance(pm.angle, em.angle) > config.match_tol_angle:
                continue
            matched += 1
            break
    return matched / len(probe.minutiae)


def match_finger(
    probe: FingerTemplate,
    enrolled: "list[FingerTemplate]",
    config: SimConfig = DEFAULT_CONFIG,
) -> int:
    """Best (minimum) score of the probe against the enrolled templates.

    Score 0 means certain match; an exact template copy scores 0.
    """
    if not enrolled:
        raise NoTemplateError("cannot match against an empty enrollment")
    probe_bytes = probe.to_bytes()
    enrollment_digest = _prf(b"enrollment", *[t.to_bytes() for t in enrolled])
    # one shared unrelated draw per enrollment keeps min() uniform for impostors
    unrelated_score = int(
        _prf_unit(b"finger-unrelated", probe_bytes, enrollment_digest) * MAXINT
    )
    best = None
    for t in enrolled:
        t_bytes = t.to_bytes()
        if t_bytes == probe_bytes:
            score = 0
        elif _overlap_fraction(probe, t, config) >= config.overlap_related_min:
            q = _prf_unit(b"finger-related", probe_bytes, t_bytes) * config.genuine_q_max
            score = int(q * MAXINT)
        else:
            score = unrelated_score
        best = score if best is None else min(best, score)
    return best


def impostor_finger_scores(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` scores from the impostor model (uniform on [0, MAXINT))."""
    return rng.integers(0, MAXINT, size=n, dtype=np.int64)


# --- face templates -----------------------------------------------------------


def enroll_face(seed, config: SimConfig = DEFAULT_CONFIG) -> FaceTemplate:
    """Derive the enrolled facial feature-point template from a capture seed."""
    rng = _rng_from(b"face-base", _seed_bytes(seed))
    features = tuple(float(v) for v in rng.random(FACE_FEATURE_LEN))
    return FaceTemplate(features=features)


def _craft_at_similarity(
    enrolled: FaceTemplate, similarity: float, config: SimConfig
) -> FaceTemplate:
    # equal per-component offsets make the realized similarity exact
    d = (1.0 - similarity) / config.face_gain
    features = tuple(
        (v + d) if v + d <= 1.0 else (v - d) for v in enrolled.features
    )
    return FaceTemplate(features=features)


def _target_similarity(
    genuineness: Genuineness, noise_level: float, u: float, tail_u: float,
    config: SimConfig,
) -> float:
    if genuineness is Genuineness.GENUINE:
        lo = max(0.5, config.genuine_sim_min - noise_level * config.genuine_sim_noise_span)
        return lo + u * (1.0 - lo)
    if genuineness is Genuineness.DEGRADED:
        return config.degraded_sim_low + u * (
            config.degraded_sim_high - config.degraded_sim_low
        )
    if tail_u < config.impostor_face_tail:
        return config.genuine_sim_min + u * (1.0 - config.genuine_sim_min)
    return config.impostor_sim_low + u * (config.genuine_sim_min - config.impostor_sim_low)


def make_face_probe(
    enrolled: FaceTemplate,
    probe_seed,
    genuineness: Genuineness = Genuineness.GENUINE,
    noise_level: float = 0.0,
    config: SimConfig = DEFAULT_CONFIG,
) -> ProbeSample:
    """Generate a fresh face capture at a similarity drawn from the configured
    distribution for its genuineness class."""
    if not (0.0 <= noise_level <= 1.0):
        raise ValueError(f"noise_level {noise_level} outside [0, 1]")
    base = (b"face-probe", enrolled.to_bytes(), _seed_bytes(probe_seed))
    u = _prf_unit(*base, b"similarity")
    tail_u = _prf_unit(*base, b"tail")
    target = _target_similarity(genuineness, noise_level, u, tail_u, config)
    template = _craft_at_similarity(enrolled, target, config)
    return ProbeSample(Modality.FACE, template, genuineness, noise_level)


def match_face(
    probe: FaceTemplate, enrolled: FaceTemplate, config: SimConfig = DEFAULT_CONFIG
) -> float:
    """Similarity in [0, 1]; identical templates score 1.0."""
    if len(probe.features) != FACE_FEATURE_LEN or len(enrolled.features) != FACE_FEATURE_LEN:
        raise TemplateShapeError("face templates must both have length 140")
    mad = sum(abs(a - b) for a, b in zip(probe.features, enrolled.features)) / FACE_FEATURE_LEN
    return 1.0 - min(max(config.face_gain * mad, 0.0), 1.0)


def impostor_face_similarities(
    n: int, rng: np.random.Generator, config: SimConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """Draw ``n`` similarities from the impostor model."""
    tail_u = rng.random(n)
    u = rng.random(n)
    above = config.genuine_sim_min + u * (1.0 - config.genuine_sim_min)
    below = config.impostor_sim_low + u * (config.genuine_sim_min - config.impostor_sim_low)
    return np.where(tail_u < config.impostor_face_tail, above, below)


# --- demographics ---------------------------------------------------------------


def estimate_demographics(
    probe: FaceTemplate,
    truth: UserProfile,
    noise_level: float,
    config: SimConfig = DEFAULT_CONFIG,
) -> DemographicEstimate:
    """Simulate on-the-fly age/gender extraction from a facial capture.

    At noise 0 the true gender receives ``1 - gender_floor`` probability mass
    and the age estimate lies within the base error band; rising noise shifts
    mass toward the wrong gender and widens the age error in expectation.
    """
    if not (0.0 <= noise_level <= 1.0):
        raise ValueError(f"noise_level {noise_level} outside [0, 1]")
    base = (
        b"demographics",
        probe.to_bytes(),
        truth.user_id.encode("utf-8"),
        struct.pack("<d", noise_level),
    )
    u_gender = _prf_unit(*base, b"gender")
    loser_mass = config.gender_floor + (1.0 - config.gender_floor) * noise_level * u_gender**2
    true_mass = 1.0 - loser_mass
    if truth.declared_gender is Gender.MALE:
        male, female = true_mass, loser_mass
    else:
        male, female = loser_mass, true_mass

    u_age = _prf_unit(*base, b"age")
    span = config.age_base_error + config.age_noise_error_span * noise_level
    error = int(round((2.0 * u_age - 1.0) * span))
    age = min(max(truth.declared_age + error, 1), 120)
    return DemographicEstimate(male_prob=male, female_prob=female, age_estimate=age)
