"""Resource-server logic: ledger replication and token-gated resource access.

The server trusts only its chain replica: verification needs no call back to
the BCA. Sync is pull-based (GET /chain canonical bytes) and runs on a
period plus one retry when verification misses an unknown user, which
self-heals tokens for freshly enrolled users. A tampered or unparseable
remote never replaces a valid local chain.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from bcauth.errors import (
    ForgeryError,
    KeyExpiredError,
    MalformedTokenError,
    SyncFailureError,
    TokenError,
    TokenExpiredError,
    UnknownUserError,
    ChainFormatError,
)
from bcauth.ledger import Chain, sync, validate_chain
from bcauth.tokens import AccessToken, authorize, verify

logger = logging.getLogger(__name__)


@dataclass
class ResourceConfig:
    server_id: str = "rs1"
    listen_addr: str = "127.0.0.1:8500"
    confidence_gate: float = 80.0
    bca_endpoint: str = "http://127.0.0.1:8400"
    sync_interval_seconds: float = 10.0
    difficulty: int = 8
    resources: dict[str, str] = field(default_factory=lambda: {"demo": "demo payload"})

    @classmethod
    def load(cls, path: str | Path) -> "ResourceConfig":
        return cls(**json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ServeResult:
    status: int  # 200, 401, 403, or 404
    payload: str | None = None
    reason: str | None = None


class ResourceService:
    def __init__(self, config: ResourceConfig | None = None, fetch_chain=None,
                 clock=time.time):
        """``fetch_chain`` returns the BCA chain's canonical bytes; the default
        pulls ``GET {bca_endpoint}/chain`` over HTTP."""
        self.config = config or ResourceConfig()
        self.clock = clock
        self._fetch_chain = fetch_chain or self._http_fetch
        self._chain = Chain(difficulty=self.config.difficulty)
        self._chain_lock = threading.Lock()
        self._sync_thread: threading.Thread | None = None
        self._stop = threading.Event()

    def _http_fetch(self) -> bytes:
        response = httpx.get(f"{self.config.bca_endpoint}/chain", timeout=5.0)
        response.raise_for_status()
        return response.content

    @property
    def chain(self) -> Chain:
        with self._chain_lock:
            return self._chain

    def sync_ledger(self) -> Chain:
        """Pull the BCA chain and adopt it iff it is longer and valid."""
        local = self.chain
        try:
            remote_bytes = self._fetch_chain()
            remote = Chain.from_bytes(remote_bytes, difficulty=self.config.difficulty)
        except (httpx.HTTPError, ChainFormatError, OSError) as exc:
            logger.warning("ledger sync degraded, keeping local chain: %s", exc)
            return local
        try:
            winner = sync(local, remote)
        except SyncFailureError as exc:
            logger.warning("ledger sync failed, keeping local chain: %s", exc)
            return local
        if winner is not local and validate_chain(winner):
            with self._chain_lock:
                self._chain = winner
            logger.info("adopted remote chain of length %d", len(winner))
        return self.chain

    def serve(self, resource_id: str, bearer_token: str | None, now: float | None = None) -> ServeResult:
        """Verify the bearer credential against the replica, then apply the
        local confidence gate. 401 covers verification failures; 403 means a
        verified token whose confidence is below the local gate (the level is
        never echoed back)."""
        now = self.clock() if now is None else now
        if resource_id not in self.config.resources:
            return ServeResult(status=404, reason="no such resource")
        if not bearer_token:
            return ServeResult(status=401, reason="missing bearer token")
        try:
            token = AccessToken.from_wire(bearer_token)
        except MalformedTokenError:
            return ServeResult(status=401, reason="malformed token")

        claims = None
        for attempt in (0, 1):
            try:
                claims = verify(token, self.chain, int(now))
                break
            except UnknownUserError:
                if attempt == 0:
                    self.sync_ledger()  # freshly enrolled user: one resync retry
                    continue
                return ServeResult(status=401, reason="unknown user")
            except (ForgeryError, TokenExpiredError, KeyExpiredError, TokenError) as exc:
                return ServeResult(status=401, reason=type(exc).__name__)
        if claims is None:
            return ServeResult(status=401, reason="verification failed")
        if claims.audience != self.config.server_id:
            return ServeResult(status=401, reason="audience mismatch")
        if not authorize(claims, self.config.confidence_gate):
            return ServeResult(status=403, reason="confidence below local policy")
        return ServeResult(status=200, payload=self.config.resources[resource_id])

    # -- background replication --------------------------------------------------

    def start_background_sync(self) -> None:
        if self._sync_thread is not None:
            return
        self._stop.clear()

        def loop() -> None:
            while not self._stop.wait(self.config.sync_interval_seconds):
                self.sync_ledger()

        self._sync_thread = threading.Thread(target=loop, daemon=True)
        self._sync_thread.start()

    def stop_background_sync(self) -> None:
        if self._sync_thread is None:
            return
        self._stop.set()
        self._sync_thread.join(timeout=2.0)
        self._sync_thread = None
