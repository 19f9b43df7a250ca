"""Synthetic matcher contracts: determinism, calibration, separation."""

from __future__ import annotations

import numpy as np
import pytest

from bcauth import biosim
from bcauth.biosim import (
    FaceTemplate,
    FingerTemplate,
    Gender,
    Genuineness,
    SimConfig,
    UserProfile,
)
from bcauth.errors import EnrollmentArityError, NoTemplateError, TemplateShapeError

MAXINT = biosim.MAXINT

PROFILE = UserProfile(
    user_id="u1",
    name="User One",
    privileges=("read",),
    declared_gender=Gender.MALE,
    declared_age=40,
)


def enrolled_finger(user_seed="u1-finger", config=None):
    cfg = config or SimConfig()
    return biosim.enroll_finger([user_seed] * 4, PROFILE, cfg)


# --- enrollment ---------------------------------------------------------------


def test_enroll_finger_zero_perturbation_identical_templates():
    cfg = SimConfig(scan_jitter_px=0.0, scan_jitter_angle=0.0)
    templates = biosim.enroll_finger(["seed"] * 4, PROFILE, cfg)
    assert len(templates) == 4
    blobs = {t.to_bytes() for t in templates}
    assert len(blobs) == 1


def test_enroll_finger_nonempty_templates():
    templates = enrolled_finger()
    assert len(templates) == 4
    for t in templates:
        assert len(t.minutiae) > 0


def test_enroll_finger_deterministic_across_runs():
    a = biosim.enroll_finger(["s0", "s1", "s2", "s3"], PROFILE)
    b = biosim.enroll_finger(["s0", "s1", "s2", "s3"], PROFILE)
    assert [t.to_bytes() for t in a] == [t.to_bytes() for t in b]


def test_enroll_finger_wrong_arity():
    with pytest.raises(EnrollmentArityError):
        biosim.enroll_finger(["a", "b", "c"], PROFILE)
    with pytest.raises(EnrollmentArityError):
        biosim.enroll_finger(["a"] * 5, PROFILE)


def test_templates_do_not_carry_seeds():
    # one-way contract: neither the dataclass fields nor the biosim API
    # expose a route from a template back to its generating seed
    t = enrolled_finger()[0]
    field_names = set(t.__dataclass_fields__)
    assert "seed" not in field_names
    public_api = [n for n in dir(biosim) if not n.startswith("_")]
    assert not any("seed" in n.lower() and "recover" in n.lower() for n in public_api)
    assert not any(n.lower().startswith("invert") for n in public_api)


# --- finger matching ------------------------------------------------------------


def test_self_match_scores_zero():
    templates = enrolled_finger()
    assert biosim.match_finger(templates[0], templates) == 0


def test_match_finger_empty_enrollment():
    probe = enrolled_finger()[0]
    with pytest.raises(NoTemplateError):
        biosim.match_finger(probe, [])


def test_genuine_probe_scores_in_low_tail():
    cfg = SimConfig()
    templates = enrolled_finger(config=cfg)
    for i in range(20):
        probe = biosim.make_finger_probe("u1-finger", f"p{i}", Genuineness.GENUINE, 0.0, cfg)
        score = biosim.match_finger(probe.payload, templates, cfg)
        assert 0 <= score <= cfg.genuine_q_max * MAXINT + 1


def test_match_scores_deterministic():
    templates = enrolled_finger()
    probe = biosim.make_finger_probe("u1-finger", "p", Genuineness.GENUINE, 0.1)
    s1 = biosim.match_finger(probe.payload, templates)
    s2 = biosim.match_finger(probe.payload, templates)
    assert s1 == s2


def test_impostor_matcher_path_agrees_with_uniform_model():
    # full template-matching path: mean and median of real impostor scores
    # must sit where a uniform draw on [0, MAXINT) puts them
    templates = enrolled_finger()
    n = 2000
    scores = []
    for i in range(n):
        probe = biosim.make_finger_probe("u1-finger", f"imp{i}", Genuineness.IMPOSTOR)
        scores.append(biosim.match_finger(probe.payload, templates))
    scores = np.asarray(scores, dtype=np.float64)
    mean = scores.mean()
    sigma_mean = MAXINT / np.sqrt(12.0 * n)
    assert abs(mean - MAXINT / 2.0) < 4.0 * sigma_mean
    below_half = float((scores < MAXINT / 2).mean())
    assert abs(below_half - 0.5) < 4.0 * np.sqrt(0.25 / n)


@pytest.mark.parametrize("threshold", [2_147_483, 214_748, 21_474, 2_147])
def test_impostor_calibration_within_four_sigma(threshold):
    # Monte Carlo oracle for the threshold/FPIR table: empirical false-match
    # frequency under the impostor model vs the analytic threshold/MAXINT
    n = 1_000_000
    rng = np.random.default_rng(20_240_601 + threshold)
    scores = biosim.impostor_finger_scores(n, rng)
    hits = int((scores < threshold).sum())
    p = threshold / MAXINT
    sigma = np.sqrt(n * p * (1.0 - p))
    assert abs(hits - n * p) <= 4.0 * sigma


def test_genuine_impostor_separation():
    cfg = SimConfig()
    templates = enrolled_finger(config=cfg)
    genuine = [
        biosim.match_finger(
            biosim.make_finger_probe("u1-finger", f"g{i}", Genuineness.GENUINE, 0.0, cfg).payload,
            templates,
            cfg,
        )
        for i in range(101)
    ]
    rng = np.random.default_rng(7)
    impostor = biosim.impostor_finger_scores(100_001, rng)
    thresholds = [2_147_483, 214_748, 21_474, 2_147]
    assert float(np.median(genuine)) < min(thresholds)
    assert float(np.median(impostor)) > max(thresholds)


# --- face matching ---------------------------------------------------------------


def test_face_identity_scores_one():
    face = biosim.enroll_face("u1-face")
    assert biosim.match_face(face, face) == 1.0


def test_face_maximal_distance_scores_zero():
    a = FaceTemplate(features=tuple([0.0] * 140))
    b = FaceTemplate(features=tuple([1.0] * 140))
    assert biosim.match_face(a, b, SimConfig(face_gain=1.0)) == 0.0
    assert biosim.match_face(a, b, SimConfig(face_gain=2.0)) == 0.0


def test_face_shape_mismatch():
    with pytest.raises(TemplateShapeError):
        FaceTemplate(features=tuple([0.5] * 139))


def test_genuine_face_probe_similarity_above_threshold():
    cfg = SimConfig()
    face = biosim.enroll_face("u1-face", cfg)
    for i in range(50):
        probe = biosim.make_face_probe(face, f"p{i}", Genuineness.GENUINE, 0.0, cfg)
        assert biosim.match_face(probe.payload, face, cfg) >= cfg.genuine_sim_min - 1e-12


def test_impostor_face_tail_calibration():
    # >= 10^7 impostor draws: empirical P(sim >= 0.992) within 4 sigma of 2e-6
    cfg = SimConfig()
    n = 10_000_000
    rng = np.random.default_rng(424_242)
    sims = biosim.impostor_face_similarities(n, rng, cfg)
    hits = int((sims >= cfg.genuine_sim_min).sum())
    expected = n * cfg.impostor_face_tail
    sigma = np.sqrt(expected)
    assert abs(hits - expected) <= 4.0 * sigma


def test_impostor_face_probe_matches_drawn_similarity_model():
    cfg = SimConfig()
    face = biosim.enroll_face("u1-face", cfg)
    sims = []
    for i in range(500):
        probe = biosim.make_face_probe(face, f"imp{i}", Genuineness.IMPOSTOR, 0.0, cfg)
        sims.append(biosim.match_face(probe.payload, face, cfg))
    sims = np.asarray(sims)
    # nearly all mass below the operating threshold, spread over the configured band
    assert (sims < cfg.genuine_sim_min).mean() > 0.99
    assert sims.min() >= cfg.impostor_sim_low - 1e-9


# --- demographics -----------------------------------------------------------------


def test_demographics_low_noise_shape_matches_reported_output():
    # reported output shape at low noise: overwhelming mass on the true
    # gender (e.g. male 0.969999 / female 0.030001)
    face = biosim.enroll_face("u1-face")
    est = biosim.estimate_demographics(face, PROFILE, 0.05)
    assert est.male_prob >= 0.95
    assert est.female_prob == pytest.approx(1.0 - est.male_prob, abs=1e-12)
    assert est.male_prob + est.female_prob == pytest.approx(1.0, abs=1e-9)


def test_demographics_zero_noise_gender_mass():
    face = biosim.enroll_face("u1-face")
    cfg = SimConfig()
    est = biosim.estimate_demographics(face, PROFILE, 0.0, cfg)
    assert est.male_prob >= 1.0 - cfg.gender_floor - 1e-12


def test_demographics_zero_noise_age_band():
    face = biosim.enroll_face("u1-face")
    for i in range(50):
        probe = biosim.make_face_probe(face, f"p{i}", Genuineness.GENUINE, 0.0)
        est = biosim.estimate_demographics(probe.payload, PROFILE, 0.0)
        assert 38 <= est.age_estimate <= 42


def test_demographics_noise_increases_wrong_gender_frequency():
    face = biosim.enroll_face("u1-face")
    trials = 10_000

    def wrong_fraction(noise: float) -> float:
        wrong = 0
        for i in range(trials):
            probe = biosim.make_face_probe(face, f"t{i}", Genuineness.IMPOSTOR)
            est = biosim.estimate_demographics(probe.payload, PROFILE, noise)
            if est.female_prob > est.male_prob:
                wrong += 1
        return wrong / trials

    assert wrong_fraction(1.0) > wrong_fraction(0.0)


def test_demographics_noise_widens_age_error():
    face = biosim.enroll_face("u1-face")
    trials = 2_000

    def mean_abs_error(noise: float) -> float:
        total = 0
        for i in range(trials):
            probe = biosim.make_face_probe(face, f"t{i}", Genuineness.IMPOSTOR)
            est = biosim.estimate_demographics(probe.payload, PROFILE, noise)
            total += abs(est.age_estimate - PROFILE.declared_age)
        return total / trials

    assert mean_abs_error(0.0) < mean_abs_error(0.5) < mean_abs_error(1.0)


def test_demographics_noise_out_of_range():
    face = biosim.enroll_face("u1-face")
    with pytest.raises(ValueError):
        biosim.estimate_demographics(face, PROFILE, 1.5)


# --- serialization and config ------------------------------------------------------


def test_finger_template_bytes_round_trip():
    t = enrolled_finger()[0]
    assert FingerTemplate.from_bytes(t.to_bytes()) == t


def test_face_template_bytes_round_trip():
    f = biosim.enroll_face("u1-face")
    assert FaceTemplate.from_bytes(f.to_bytes()) == f


def test_sim_config_json_round_trip():
    cfg = SimConfig(minutiae_count=24, face_gain=1.8)
    assert SimConfig.from_json(cfg.to_json()) == cfg
