"""Synthetic stand-in for the proprietary biometric capture/matching SDKs.

Generates fingerprint and face templates with controlled genuine/impostor
score distributions, computes match scores, and estimates demographics.
"""

from bcauth.biosim.templates import (
    FACE_FEATURE_LEN,
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
from bcauth.biosim.simulator import (
    MAXINT,
    SimConfig,
    enroll_face,
    enroll_finger,
    estimate_demographics,
    impostor_face_similarities,
    impostor_finger_scores,
    make_face_probe,
    make_finger_probe,
    match_face,
    match_finger,
)

__all__ = [
    "FACE_FEATURE_LEN",
    "MAXINT",
    "DemographicEstimate",
    "FaceTemplate",
    "FingerTemplate",
    "Gender",
    "Genuineness",
    "Minutia",
    "MinutiaKind",
    "Modality",
    "ProbeSample",
    "SimConfig",
    "UserProfile",
    "enroll_face",
    "enroll_finger",
    "estimate_demographics",
    "impostor_face_similarities",
    "impostor_finger_scores",
    "make_face_probe",
    "make_finger_probe",
    "match_face",
    "match_finger",
]
