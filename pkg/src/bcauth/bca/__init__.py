"""The identity provider: enrollment, the authentication pipeline, confidence
queries, admin control, ledger mining, and persistence."""

from bcauth.bca.config import BcaConfig
from bcauth.bca.service import AuthOutcome, AuthRequest, BcaService, EnrollmentRecord
from bcauth.bca.api import create_app

__all__ = [
    "AuthOutcome",
    "AuthRequest",
    "BcaConfig",
    "BcaService",
    "EnrollmentRecord",
    "create_app",
]
