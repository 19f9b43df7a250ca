"""Record store backing the BCA: users and templates, confidence records,
and the active policy. In-memory with an optional JSON snapshot on disk."""

from __future__ import annotations

import base64
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from bcauth.biosim import FaceTemplate, FingerTemplate, Gender, UserProfile
from bcauth.fusion import ConfidenceRecord, ConfidenceUpdate
from bcauth.normalization import ModalityVector, ThresholdPolicy


@dataclass(frozen=True)
class EnrollmentRecord:
    profile: UserProfile
    finger_templates: tuple[FingerTemplate, ...]
    face_template: FaceTemplate
    ledger_tx_ref: tuple[int, int]  # (block index, tx position)
    created_at: float


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(text: str) -> bytes:
    return base64.b64decode(text.encode("ascii"))


class RecordStore:
    """Three collections guarded by one lock; writes snapshot to disk when a
    path is configured."""

    def __init__(self, path: str | None = None):
        self._path = Path(path) if path else None
        self._lock = threading.RLock()
        self.users: dict[str, EnrollmentRecord] = {}
        self.signing_keys: dict[str, bytes] = {}  # private halves; never served
        self.confidence: dict[str, ConfidenceRecord] = {}
        self.policy: ThresholdPolicy | None = None
        self.policy_log: list[dict] = []
        if self._path and self._path.exists():
            self._load()

    # -- user records --------------------------------------------------------

    def has_user(self, user_id: str) -> bool:
        with self._lock:
            return user_id in self.users

    def get_user(self, user_id: str) -> EnrollmentRecord | None:
        with self._lock:
            return self.users.get(user_id)

    def put_user(self, record: EnrollmentRecord, signing_key: bytes) -> None:
        with self._lock:
            self.users[record.profile.user_id] = record
            self.signing_keys[record.profile.user_id] = signing_key
            self.confidence.setdefault(
                record.profile.user_id, ConfidenceRecord.fresh(record.profile.user_id)
            )
            self._persist()

    def delete_user(self, user_id: str) -> bool:
        with self._lock:
            existed = self.users.pop(user_id, None) is not None
            self.signing_keys.pop(user_id, None)
            self.confidence.pop(user_id, None)
            if existed:
                self._persist()
            return existed

    def list_users(self) -> list[EnrollmentRecord]:
        with self._lock:
            return list(self.users.values())

    # -- confidence records ----------------------------------------------------

    def get_confidence(self, user_id: str) -> ConfidenceRecord | None:
        with self._lock:
            return self.confidence.get(user_id)

    def put_confidence(self, record: ConfidenceRecord) -> None:
        with self._lock:
            self.confidence[record.user_id] = record
            self._persist()

    # -- policy -----------------------------------------------------------------

    def get_policy(self) -> ThresholdPolicy | None:
        with self._lock:
            return self.policy

    def put_policy(self, policy: ThresholdPolicy, admin_id: str, at: float) -> None:
        with self._lock:
            self.policy = policy
            self.policy_log.append(
                {"at": at, "admin": admin_id, "policy": policy.to_dict()}
            )
            self._persist()

    # -- snapshot ------------------------------------------------------------------

    def _persist(self) -> None:
        if not self._path:
            return
        snapshot = {
            "users": {
                uid: {
                    "profile": {
                        "user_id": rec.profile.user_id,
                        "name": rec.profile.name,
                        "privileges": list(rec.profile.privileges),
                        "declared_gender": rec.profile.declared_gender.value,
                        "declared_age": rec.profile.declared_age,
                    },
                    "finger_templates": [_b64(t.to_bytes()) for t in rec.finger_templates],
                    "face_template": _b64(rec.face_template.to_bytes()),
                    "ledger_tx_ref": list(rec.ledger_tx_ref),
                    "created_at": rec.created_at,
                    "signing_key": _b64(self.signing_keys[uid]),
                }
                for uid, rec in self.users.items()
            },
            "confidence": {
                uid: {
                    "level": rec.level,
                    "history": [
                        {
                            "timestamp": u.timestamp,
                            "vector": u.vector.to_dict(),
                            "fused": u.fused,
                            "level": u.level,
                        }
                        for u in rec.history
                    ],
                }
                for uid, rec in self.confidence.items()
            },
            "policy": self.policy.to_dict() if self.policy else None,
            "policy_log": self.policy_log,
        }
        tmp = self._path.with_suffix(".tmp")
        tmp.write_text(json.dumps(snapshot))
        tmp.replace(self._path)

    def _load(self) -> None:
        snapshot = json.loads(self._path.read_text())
        for uid, raw in snapshot.get("users", {}).items():
            p = raw["profile"]
            profile = UserProfile(
                user_id=p["user_id"],
                name=p["name"],
                privileges=tuple(p["privileges"]),
                declared_gender=Gender(p["declared_gender"]),
                declared_age=p["declared_age"],
            )
            self.users[uid] = EnrollmentRecord(
                profile=profile,
                finger_templates=tuple(
                    FingerTemplate.from_bytes(_unb64(t)) for t in raw["finger_templates"]
                ),
                face_template=FaceTemplate.from_bytes(_unb64(raw["face_template"])),
                ledger_tx_ref=tuple(raw["ledger_tx_ref"]),
                created_at=raw["created_at"],
            )
            self.signing_keys[uid] = _unb64(raw["signing_key"])
        for uid, raw in snapshot.get("confidence", {}).items():
            history = tuple(
                ConfidenceUpdate(
                    timestamp=u["timestamp"],
                    vector=ModalityVector(**u["vector"]),
                    fused=u["fused"],
                    level=u["level"],
                )
                for u in raw["history"]
            )
            self.confidence[uid] = ConfidenceRecord(
                user_id=uid, level=raw["level"], history=history
            )
        if snapshot.get("policy"):
            self.policy = ThresholdPolicy.from_dict(snapshot["policy"])
        self.policy_log = snapshot.get("policy_log", [])
