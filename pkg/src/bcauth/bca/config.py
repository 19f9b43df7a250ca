"""BCA server configuration (JSON file round-trippable)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from bcauth.biosim import SimConfig
from bcauth.normalization import ThresholdPolicy

DEFAULT_KEY_VALIDITY_SECONDS = 365 * 86_400


@dataclass
class BcaConfig:
    listen_addr: str = "127.0.0.1:8400"
    difficulty: int = 8
    alpha: float = 0.3
    policy: ThresholdPolicy = field(default_factory=ThresholdPolicy)
    store_path: str | None = None
    admin_secret: str = "change-me"
    token_ttl_seconds: int = 300
    default_audience: str = "resource-default"
    key_validity_seconds: int = DEFAULT_KEY_VALIDITY_SECONDS
    sim: SimConfig = field(default_factory=SimConfig)

    def to_dict(self) -> dict:
        return {
            "listen_addr": self.listen_addr,
            "difficulty": self.difficulty,
            "alpha": self.alpha,
            "policy": self.policy.to_dict(),
            "store_path": self.store_path,
            "admin_secret": self.admin_secret,
            "token_ttl_seconds": self.token_ttl_seconds,
            "default_audience": self.default_audience,
            "key_validity_seconds": self.key_validity_seconds,
            "sim": self.sim.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BcaConfig":
        kwargs = dict(d)
        if "policy" in kwargs:
            kwargs["policy"] = ThresholdPolicy.from_dict(kwargs["policy"])
        if "sim" in kwargs:
            kwargs["sim"] = SimConfig.from_dict(kwargs["sim"])
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def load(cls, path: str | Path) -> "BcaConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())
