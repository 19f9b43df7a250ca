"""Core BCA logic: enrollment with ledger anchoring, and the authentication
pipeline (match -> normalize -> fuse -> update -> gate -> issue).

Confidence is updated on success and failure alike: bad attempts must erode
the stored level. Each request runs inside a per-user critical section, so
no confidence update is lost under concurrency, and reads one consistent
policy snapshot.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from bcauth.biosim import (
    FaceTemplate,
    FingerTemplate,
    UserProfile,
    estimate_demographics,
    match_face,
    match_finger,
)
from bcauth.bca.config import BcaConfig
from bcauth.bca.store import EnrollmentRecord, RecordStore
from bcauth.errors import DuplicateUserError, EnrollmentArityError, UnknownUserError
from bcauth.fusion import (
    ConfidenceRecord,
    complete_table,
    decide_access,
    infer,
    train,
    update_confidence,
)
from bcauth.ledger import Chain, LedgerTransaction, mine_block
from bcauth.normalization import ThresholdPolicy, normalize
from bcauth.tokens import (
    AccessToken,
    generate_keypair,
    issue,
    private_key_bytes,
    private_key_from_bytes,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuthRequest:
    user_id: str
    finger_probe: FingerTemplate
    face_probe: FaceTemplate


@dataclass(frozen=True)
class AuthOutcome:
    granted: bool
    level: float
    token: AccessToken | None = None

    @property
    def wire_token(self) -> str | None:
        return self.token.to_wire() if self.token else None


class BcaService:
    def __init__(self, config: BcaConfig | None = None, clock=time.time):
        self.config = config or BcaConfig()
        self.clock = clock
        self.store = RecordStore(self.config.store_path)
        if self.store.get_policy() is None:
            self.store.put_policy(self.config.policy, admin_id="boot", at=clock())
        self.model = train(complete_table())
        self._chain_path = (
            Path(self.config.store_path).with_suffix(".chain")
            if self.config.store_path
            else None
        )
        if self._chain_path and self._chain_path.exists():
            self.chain = Chain.load(self._chain_path, difficulty=self.config.difficulty)
        else:
            self.chain = Chain(difficulty=self.config.difficulty)
        self._user_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._enroll_lock = threading.Lock()

    # -- helpers ---------------------------------------------------------------

    def _lock_for(self, user_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._user_locks.get(user_id)
            if lock is None:
                lock = self._user_locks[user_id] = threading.Lock()
            return lock

    @property
    def policy(self) -> ThresholdPolicy:
        return self.store.get_policy()

    def _save_chain(self) -> None:
        if self._chain_path:
            self.chain.save(self._chain_path)

    # -- operations ---------------------------------------------------------------

    def enroll(
        self,
        profile: UserProfile,
        finger_templates,
        face_template: FaceTemplate,
        now: float | None = None,
    ) -> EnrollmentRecord:
        """Persist templates, anchor a fresh verification key on the ledger,
        and open a fresh confidence record.

        All validation happens before any state changes, so a failed enroll
        leaves no user state, templates, or ledger transactions behind.
        """
        templates = tuple(finger_templates)
        if len(templates) != 4:
            raise EnrollmentArityError(
                f"enrollment requires exactly 4 finger templates, got {len(templates)}"
            )
        now = self.clock() if now is None else now
        with self._enroll_lock:
            if self.store.has_user(profile.user_id):
                raise DuplicateUserError(f"user {profile.user_id!r} already enrolled")
            private, public = generate_keypair()
            tx = LedgerTransaction(
                user_id=profile.user_id,
                timestamp=int(now),
                key=public,
                start_date=int(now),
                end_date=int(now) + self.config.key_validity_seconds,
            )
            block = mine_block(self.chain, [tx])
            self._save_chain()
            record = EnrollmentRecord(
                profile=profile,
                finger_templates=templates,
                face_template=face_template,
                ledger_tx_ref=(block.index, 0),
                created_at=now,
            )
            self.store.put_user(record, private_key_bytes(private))
            logger.info("enrolled %s (block %d)", profile.user_id, block.index)
            return record

    def authenticate(
        self,
        request: AuthRequest,
        now: float | None = None,
        audience: str | None = None,
    ) -> AuthOutcome:
        """Run the full pipeline and gate on the updated confidence level.

        Grants return a token carrying the updated level; denials return the
        updated level alone (never the per-modality booleans).
        """
        now = self.clock() if now is None else now
        audience = audience or self.config.default_audience
        with self._lock_for(request.user_id):
            enrollment = self.store.get_user(request.user_id)
            if enrollment is None:
                raise UnknownUserError(f"user {request.user_id!r} is not enrolled")
            policy = self.policy  # one consistent snapshot per request

            finger_score = match_finger(
                request.finger_probe, list(enrollment.finger_templates), self.config.sim
            )
            face_similarity = match_face(
                request.face_probe, enrollment.face_template, self.config.sim
            )
            # capture quality proxy: demographic noise rises as the face drifts
            noise = min(max(1.0 - face_similarity, 0.0), 1.0)
            estimate = estimate_demographics(
                request.face_probe, enrollment.profile, noise, self.config.sim
            )
            vector = normalize(
                finger_score, face_similarity, estimate, enrollment.profile, policy
            )
            fused = infer(self.model, vector)

            record = self.store.get_confidence(request.user_id)
            if record is None:
                record = ConfidenceRecord.fresh(request.user_id)
            record = update_confidence(
                record, fused, vector, now=now, alpha=self.config.alpha
            )
            self.store.put_confidence(record)

            if not decide_access(record.level, policy):
                return AuthOutcome(granted=False, level=record.level)
            signing_key = private_key_from_bytes(
                self.store.signing_keys[request.user_id]
            )
            token = issue(
                user_id=request.user_id,
                confidence=record.level,
                audience=audience,
                signing_key=signing_key,
                now=int(now),
                gate=policy.confidence_gate,
                ttl_seconds=self.config.token_ttl_seconds,
            )
            return AuthOutcome(granted=True, level=record.level, token=token)

    def get_confidence(self, user_id: str, limit: int = 50) -> dict:
        if not self.store.has_user(user_id):
            raise UnknownUserError(f"user {user_id!r} is not enrolled")
        record = self.store.get_confidence(user_id) or ConfidenceRecord.fresh(user_id)
        recent = record.history[-limit:]
        return {
            "user_id": user_id,
            "level": record.level,
            "transactions": len(record.history),
            "history": [
                {
                    "timestamp": u.timestamp,
                    "fused": u.fused,
                    "level": u.level,
                    **u.vector.to_dict(),
                }
                for u in recent
            ],
        }

    def analytics(self, user_id: str) -> ConfidenceRecord:
        if not self.store.has_user(user_id):
            raise UnknownUserError(f"user {user_id!r} is not enrolled")
        return self.store.get_confidence(user_id) or ConfidenceRecord.fresh(user_id)

    def set_policy(self, policy: ThresholdPolicy, admin_id: str = "admin") -> ThresholdPolicy:
        """Atomically replace the active policy; later requests use it."""
        self.store.put_policy(policy, admin_id=admin_id, at=self.clock())
        logger.info("policy replaced by %s: %s", admin_id, policy.to_dict())
        return policy

    def list_users(self) -> list[dict]:
        out = []
        for rec in self.store.list_users():
            conf = self.store.get_confidence(rec.profile.user_id)
            out.append(
                {
                    "user_id": rec.profile.user_id,
                    "name": rec.profile.name,
                    "privileges": list(rec.profile.privileges),
                    "declared_gender": rec.profile.declared_gender.value,
                    "declared_age": rec.profile.declared_age,
                    "created_at": rec.created_at,
                    "ledger_block": rec.ledger_tx_ref[0],
                    "level": conf.level if conf else None,
                    "transactions": len(conf.history) if conf else 0,
                }
            )
        out.sort(key=lambda u: u["created_at"])
        return out

    def delete_user(self, user_id: str) -> None:
        if not self.store.delete_user(user_id):
            raise UnknownUserError(f"user {user_id!r} is not enrolled")
