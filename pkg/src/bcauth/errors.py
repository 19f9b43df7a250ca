"""Exception hierarchy shared across the bcauth stack."""

from __future__ import annotations


class BcauthError(Exception):
    """Base class for all bcauth errors."""


# --- biometric simulation ---------------------------------------------------


class EnrollmentArityError(BcauthError):
    """Finger enrollment requires exactly four scans."""


class NoTemplateError(BcauthError):
    """A match was requested against an empty template set."""


class TemplateShapeError(BcauthError):
    """Template payload has the wrong shape for its modality."""


# --- normalization ----------------------------------------------------------


class ScoreRangeError(BcauthError):
    """Matcher output outside its declared domain."""


class PolicyValidationError(BcauthError):
    """Threshold policy violates one or more field invariants.

    ``field_errors`` maps field name to a human-readable message.
    """

    def __init__(self, field_errors: dict[str, str]):
        self.field_errors = dict(field_errors)
        detail = "; ".join(f"{k}: {v}" for k, v in sorted(self.field_errors.items()))
        super().__init__(f"invalid threshold policy: {detail}")


class MemoryLimitLookupError(BcauthError):
    """Requested memory limit is not a column of the documented FAR table."""


# --- fusion -----------------------------------------------------------------


class TableIntegrityError(BcauthError):
    """Fusion training table contains duplicate modality vectors."""


class TrainingError(BcauthError):
    """Fusion table is not a complete 16-row truth table."""


class TimestampRegressionError(BcauthError):
    """Confidence history updates must carry non-decreasing timestamps."""


# --- ledger -----------------------------------------------------------------


class LedgerError(BcauthError):
    """Base class for ledger failures."""


class EmptyBlockError(LedgerError):
    """A block must carry at least one transaction."""


class TransactionValidationError(LedgerError):
    """Ledger transaction violates a field invariant."""


class ChainFormatError(LedgerError):
    """Serialized chain bytes could not be parsed."""


class UnknownUserError(LedgerError):
    """No ledger transaction (or enrollment) exists for the user."""


class KeyExpiredError(LedgerError):
    """Ledger transactions exist for the user but none covers the timestamp."""


class SyncFailureError(LedgerError):
    """Neither the local nor the remote chain validates."""


# --- tokens -----------------------------------------------------------------


class TokenError(BcauthError):
    """Base class for access-token rejections."""


class IssuanceRefusedError(TokenError):
    """Confidence level below the gate; the signer must not seal the token."""


class ForgeryError(TokenError):
    """Signature does not verify under the ledger-anchored key."""


class MalformedTokenError(TokenError):
    """Wire credential could not be decoded into a token."""


class TokenExpiredError(TokenError):
    """Token presented after its expiry timestamp."""


# --- bca server -------------------------------------------------------------


class DuplicateUserError(BcauthError):
    """Enrollment attempted for an already-enrolled user id."""
