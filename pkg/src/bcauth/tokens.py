"""Sealed access tokens carrying the user's confidence level.

Tokens are signed, not encrypted: the ledger anchors an Ed25519 public key
(32 bytes) per user and the BCA holds the private half, so any resource
server with a chain replica can verify a token offline. Claims use the same
canonical little-endian layout style as ledger blocks; the wire form is
``base64url(claims) '.' base64url(signature)``.
"""

from __future__ import annotations

import base64
import struct
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519

from bcauth.errors import (
    ForgeryError,
    IssuanceRefusedError,
    MalformedTokenError,
    TokenExpiredError,
)
from bcauth.ledger import Chain, lookup_key

DEFAULT_TTL_SECONDS = 300
SIGNATURE_LEN = 64


@dataclass(frozen=True)
class TokenClaims:
    user_id: str
    confidence: float
    issued_at: int
    expires_at: int
    audience: str

    def __post_init__(self) -> None:
        if self.issued_at >= self.expires_at:
            raise MalformedTokenError("issued_at must precede expires_at")
        if not (0.0 <= self.confidence <= 100.0):
            raise MalformedTokenError(f"confidence {self.confidence} outside [0, 100]")

    def to_bytes(self) -> bytes:
        uid = self.user_id.encode("utf-8")
        aud = self.audience.encode("utf-8")
        return (
            struct.pack("<I", len(uid))
            + uid
            + struct.pack("<dqq", self.confidence, self.issued_at, self.expires_at)
            + struct.pack("<I", len(aud))
            + aud
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "TokenClaims":
        try:
            (n,) = struct.unpack_from("<I", data, 0)
            off = 4
            uid = data[off : off + n]
            if len(uid) != n:
                raise ValueError("truncated user id")
            off += n
            confidence, issued_at, expires_at = struct.unpack_from("<dqq", data, off)
            off += 24
            (m,) = struct.unpack_from("<I", data, off)
            off += 4
            aud = data[off : off + m]
            if len(aud) != m:
                raise ValueError("truncated audience")
            off += m
            if off != len(data):
                raise ValueError("trailing bytes")
            return cls(
                user_id=uid.decode("utf-8"),
                confidence=confidence,
                issued_at=issued_at,
                expires_at=expires_at,
                audience=aud.decode("utf-8"),
            )
        except (struct.error, ValueError, UnicodeDecodeError) as exc:
            raise MalformedTokenError(f"bad claim bytes: {exc}") from exc


@dataclass(frozen=True)
class AccessToken:
    claims: TokenClaims
    signature: bytes

    def __post_init__(self) -> None:
        if len(self.signature) != SIGNATURE_LEN:
            raise MalformedTokenError(
                f"signature must be {SIGNATURE_LEN} bytes, got {len(self.signature)}"
            )

    def to_wire(self) -> str:
        return (
            _b64url(self.claims.to_bytes()) + "." + _b64url(self.signature)
        )

    @classmethod
    def from_wire(cls, credential: str) -> "AccessToken":
        parts = credential.split(".")
        if len(parts) != 2:
            raise MalformedTokenError("credential must be '<claims>.<signature>'")
        try:
            claim_bytes = _b64url_decode(parts[0])
            signature = _b64url_decode(parts[1])
        except ValueError as exc:
            raise MalformedTokenError(f"bad base64url: {exc}") from exc
        return cls(claims=TokenClaims.from_bytes(claim_bytes), signature=signature)


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(text: str) -> bytes:
    padded = text + "=" * (-len(text) % 4)
    try:
        return base64.urlsafe_b64decode(padded.encode("ascii"))
    except Exception as exc:
        raise ValueError(str(exc)) from exc


def generate_keypair() -> tuple[ed25519.Ed25519PrivateKey, bytes]:
    """Fresh signing keypair; returns (private key, 32-byte public key)."""
    private = ed25519.Ed25519PrivateKey.generate()
    public = private.public_key().public_bytes(
        serialization.Encoding.Raw, serialization.PublicFormat.Raw
    )
    return private, public


def private_key_bytes(key: ed25519.Ed25519PrivateKey) -> bytes:
    return key.private_bytes(
        serialization.Encoding.Raw,
        serialization.PrivateFormat.Raw,
        serialization.NoEncryption(),
    )


def private_key_from_bytes(raw: bytes) -> ed25519.Ed25519PrivateKey:
    return ed25519.Ed25519PrivateKey.from_private_bytes(raw)


def issue(
    user_id: str,
    confidence: float,
    audience: str,
    signing_key: ed25519.Ed25519PrivateKey,
    now: int,
    gate: float,
    ttl_seconds: int = DEFAULT_TTL_SECONDS,
) -> AccessToken:
    """Sign a token for a gate-passing confidence level.

    The signer refuses sub-gate levels outright: a token that exists always
    proves its confidence met the gate at issuance.
    """
    if confidence < gate:
        raise IssuanceRefusedError(
            f"confidence {confidence} below gate {gate}; refusing to sign"
        )
    claims = TokenClaims(
        user_id=user_id,
        confidence=confidence,
        issued_at=int(now),
        expires_at=int(now) + int(ttl_seconds),
        audience=audience,
    )
    signature = signing_key.sign(claims.to_bytes())
    return AccessToken(claims=claims, signature=signature)


def verify(token: AccessToken, chain: Chain, now: int) -> TokenClaims:
    """Check the token against the ledger; returns the claims on success.

    Accepts iff the signature verifies under the ledger key that was valid
    at ``issued_at`` (which also pins ``issued_at`` inside the key's
    validity window) and the token has not expired (``now <= expires_at``).
    Raises UnknownUserError / KeyExpiredError / ForgeryError /
    TokenExpiredError otherwise.
    """
    claims = token.claims
    key_bytes = lookup_key(chain, claims.user_id, claims.issued_at)
    public = ed25519.Ed25519PublicKey.from_public_bytes(key_bytes)
    try:
        public.verify(token.signature, claims.to_bytes())
    except InvalidSignature as exc:
        raise ForgeryError("signature does not verify under the ledger key") from exc
    if now > claims.expires_at:
        raise TokenExpiredError(f"token expired at {claims.expires_at}, now {now}")
    return claims


def authorize(claims: TokenClaims, resource_gate: float) -> bool:
    """Local policy check: inclusive confidence gate, same rule as the BCA's."""
    return claims.confidence >= resource_gate
