"""Append-only proof-of-work ledger anchoring per-user verification keys.

Canonical serialization is bit-exact (fixed field order, little-endian
integers, length-prefixed strings and lists) so block hashes are portable:
``hash = SHA-256(index || prev_hash || transactions || nonce)`` and a valid
hash carries at least ``difficulty`` leading zero bits. The genesis block
has index 0 and an all-zero previous hash. Mining searches nonces from 0
upward, so identical inputs always mine identical blocks.
"""

from __future__ import annotations

import hashlib
import struct
import threading
from dataclasses import dataclass

from bcauth.errors import (
    ChainFormatError,
    EmptyBlockError,
    KeyExpiredError,
    SyncFailureError,
    TransactionValidationError,
    UnknownUserError,
)

HASH_LEN = 32
KEY_LEN = 32
GENESIS_PREV_HASH = bytes(HASH_LEN)
DEFAULT_DIFFICULTY = 8


@dataclass(frozen=True)
class LedgerTransaction:
    """User id, timestamp, public verification key, and validity window."""

    user_id: str
    timestamp: int
    key: bytes
    start_date: int
    end_date: int

    def __post_init__(self) -> None:
        if not self.user_id:
            raise TransactionValidationError("user_id must be non-empty")
        if len(self.key) != KEY_LEN:
            raise TransactionValidationError(
                f"key must be {KEY_LEN} bytes, got {len(self.key)}"
            )
        if self.start_date >= self.end_date:
            raise TransactionValidationError(
                f"validity window [{self.start_date}, {self.end_date}] is empty"
            )

    def to_bytes(self) -> bytes:
        uid = self.user_id.encode("utf-8")
        return (
            struct.pack("<I", len(uid))
            + uid
            + struct.pack("<q", self.timestamp)
            + self.key
            + struct.pack("<qq", self.start_date, self.end_date)
        )

    def covers(self, at: int) -> bool:
        return self.start_date <= at <= self.end_date

    @classmethod
    def read_from(cls, data: bytes, offset: int) -> "tuple[LedgerTransaction, int]":
        try:
            (n,) = struct.unpack_from("<I", data, offset)
            offset += 4
            uid = data[offset : offset + n].decode("utf-8")
            if len(data[offset : offset + n]) != n:
                raise ValueError("truncated user id")
            offset += n
            (ts,) = struct.unpack_from("<q", data, offset)
            offset += 8
            key = data[offset : offset + KEY_LEN]
            if len(key) != KEY_LEN:
                raise ValueError("truncated key")
            offset += KEY_LEN
            start, end = struct.unpack_from("<qq", data, offset)
            offset += 16
        except (struct.error, ValueError, UnicodeDecodeError) as exc:
            raise ChainFormatError(f"malformed transaction bytes: {exc}") from exc
        try:
            tx = cls(user_id=uid, timestamp=ts, key=bytes(key), start_date=start, end_date=end)
        except TransactionValidationError as exc:
            raise ChainFormatError(str(exc)) from exc
        return tx, offset


@dataclass(frozen=True)
class Block:
    index: int
    prev_hash: bytes
    transactions: tuple[LedgerTransaction, ...]
    nonce: int
    hash: bytes

    def header_bytes(self) -> bytes:
        parts = [
            struct.pack("<Q", self.index),
            self.prev_hash,
            struct.pack("<I", len(self.transactions)),
        ]
        parts.extend(tx.to_bytes() for tx in self.transactions)
        parts.append(struct.pack("<Q", self.nonce))
        return b"".join(parts)

    def compute_hash(self) -> bytes:
        return hashlib.sha256(self.header_bytes()).digest()

    def to_bytes(self) -> bytes:
        return self.header_bytes() + self.hash


def meets_difficulty(digest: bytes, difficulty_bits: int) -> bool:
    if difficulty_bits == 0:
        return True
    return int.from_bytes(digest, "big") >> (256 - difficulty_bits) == 0


class Chain:
    """Block list with single-writer append; reads may run concurrently."""

    def __init__(self, difficulty: int = DEFAULT_DIFFICULTY):
        self.difficulty = difficulty
        self._blocks: tuple[Block, ...] = ()
        self._lock = threading.Lock()

    @property
    def blocks(self) -> tuple[Block, ...]:
        return self._blocks

    def __len__(self) -> int:
        return len(self._blocks)

    def head(self) -> Block | None:
        blocks = self._blocks
        return blocks[-1] if blocks else None

    def append(self, block: Block) -> None:
        with self._lock:
            expected_prev = self._blocks[-1].hash if self._blocks else GENESIS_PREV_HASH
            if block.index != len(self._blocks) or block.prev_hash != expected_prev:
                raise ChainFormatError("block does not extend the chain head")
            if block.compute_hash() != block.hash or not meets_difficulty(
                block.hash, self.difficulty
            ):
                raise ChainFormatError("block hash invalid for this chain")
            self._blocks = self._blocks + (block,)

    def replace(self, blocks: tuple[Block, ...]) -> None:
        with self._lock:
            self._blocks = tuple(blocks)

    def to_bytes(self) -> bytes:
        return b"".join(b.to_bytes() for b in self._blocks)

    @classmethod
    def from_bytes(cls, data: bytes, difficulty: int = DEFAULT_DIFFICULTY) -> "Chain":
        blocks = []
        offset = 0
        while offset < len(data):
            try:
                (index,) = struct.unpack_from("<Q", data, offset)
                offset += 8
                prev_hash = bytes(data[offset : offset + HASH_LEN])
                if len(prev_hash) != HASH_LEN:
                    raise ValueError("truncated prev_hash")
                offset += HASH_LEN
                (tx_count,) = struct.unpack_from("<I", data, offset)
                offset += 4
                if tx_count == 0:
                    raise ValueError("empty block")
                txs = []
                for _ in range(tx_count):
                    tx, offset = LedgerTransaction.read_from(data, offset)
                    txs.append(tx)
                (nonce,) = struct.unpack_from("<Q", data, offset)
                offset += 8
                digest = bytes(data[offset : offset + HASH_LEN])
                if len(digest) != HASH_LEN:
                    raise ValueError("truncated hash")
                offset += HASH_LEN
            except (struct.error, ValueError) as exc:
                raise ChainFormatError(f"malformed chain bytes: {exc}") from exc
            blocks.append(
                Block(index=index, prev_hash=prev_hash, transactions=tuple(txs),
                      nonce=nonce, hash=digest)
            )
        chain = cls(difficulty=difficulty)
        chain._blocks = tuple(blocks)
        return chain

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path, difficulty: int = DEFAULT_DIFFICULTY) -> "Chain":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read(), difficulty=difficulty)


def mine_block(chain: Chain, transactions) -> Block:
    """Mine a block over the given transactions and append it atomically.

    The nonce search starts at 0 and increments, so mining is deterministic
    given the chain state and transactions.
    """
    txs = tuple(transactions)
    if not txs:
        raise EmptyBlockError("a block must carry at least one transaction")
    for tx in txs:
        if not isinstance(tx, LedgerTransaction):
            raise TransactionValidationError(f"not a ledger transaction: {tx!r}")
    head = chain.head()
    index = len(chain)
    prev_hash = head.hash if head else GENESIS_PREV_HASH
    prefix_parts = [struct.pack("<Q", index), prev_hash, struct.pack("<I", len(txs))]
    prefix_parts.extend(tx.to_bytes() for tx in txs)
    prefix = b"".join(prefix_parts)
    nonce = 0
    while True:
        digest = hashlib.sha256(prefix + struct.pack("<Q", nonce)).digest()
        if meets_difficulty(digest, chain.difficulty):
            break
        nonce += 1
    block = Block(index=index, prev_hash=prev_hash, transactions=txs, nonce=nonce, hash=digest)
    chain.append(block)
    return block


def validate_chain(chain: Chain) -> bool:
    """True iff linkage, indices, hashes, and difficulty all hold."""
    prev_hash = GENESIS_PREV_HASH
    for i, block in enumerate(chain.blocks):
        if block.index != i or block.prev_hash != prev_hash:
            return False
        if not block.transactions:
            return False
        if block.compute_hash() != block.hash:
            return False
        if not meets_difficulty(block.hash, chain.difficulty):
            return False
        prev_hash = block.hash
    return True


def lookup_key(chain: Chain, user_id: str, at: int) -> bytes:
    """Key of the most recent transaction for the user whose validity window
    contains ``at`` (ties break to the latest block, then latest position)."""
    found_user = False
    result: bytes | None = None
    for block in chain.blocks:
        for tx in block.transactions:
            if tx.user_id != user_id:
                continue
            found_user = True
            if tx.covers(at):
                result = tx.key
    if result is not None:
        return result
    if found_user:
        raise KeyExpiredError(f"no key for {user_id!r} is valid at {at}")
    raise UnknownUserError(f"no ledger transaction for {user_id!r}")


def sync(local: Chain, remote: Chain) -> Chain:
    """Longest valid chain wins; ties keep the local chain."""
    candidates = []
    if validate_chain(local):
        candidates.append(("local", local))
    if validate_chain(remote):
        candidates.append(("remote", remote))
    if not candidates:
        raise SyncFailureError("neither chain validates")
    best = candidates[0]
    for name, chain in candidates[1:]:
        if len(chain) > len(best[1]):
            best = (name, chain)
    return best[1]
