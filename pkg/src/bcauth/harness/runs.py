"""Reproductions of the reported experiments, driven black-box over the
public server APIs. All runs are deterministic functions of (config, seed)."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from fastapi.testclient import TestClient

from bcauth import biosim
from bcauth.bca import BcaConfig, BcaService
from bcauth.bca import create_app as create_bca_app
from bcauth.biosim import Genuineness
from bcauth.harness.client import SensorClient, default_profile
from bcauth.ledger import Chain, validate_chain
from bcauth.normalization import expected_fpir
from bcauth.resource import ResourceConfig, ResourceService
from bcauth.resource import create_app as create_resource_app
from bcauth.tokens import generate_keypair, issue


def warmup_transactions(alpha: float) -> int:
    """Transactions until the moving average sits within 1% of steady state."""
    return math.ceil(math.log(0.01) / math.log(1.0 - alpha))


@dataclass
class Stack:
    """In-process BCA and resource servers, reached through real HTTP clients."""

    bca_service: BcaService
    bca_client: TestClient
    sensor: SensorClient
    rs_service: ResourceService
    rs_client: TestClient

    def close(self) -> None:
        self.bca_client.close()
        self.rs_client.close()


def build_stack(
    bca_config: BcaConfig | None = None,
    resource_config: ResourceConfig | None = None,
) -> Stack:
    bca_config = bca_config or BcaConfig()
    resource_config = resource_config or ResourceConfig(
        difficulty=bca_config.difficulty, resources={"report": "protected document"}
    )
    bca_service = BcaService(bca_config)
    bca_client = TestClient(create_bca_app(bca_service))
    sensor = SensorClient(bca_client, bca_config.sim, admin_secret=bca_config.admin_secret)
    rs_service = ResourceService(
        resource_config, fetch_chain=lambda: sensor.chain_bytes()
    )
    rs_client = TestClient(create_resource_app(rs_service))
    return Stack(bca_service, bca_client, sensor, rs_service, rs_client)


# --- fig8: confidence level over time ----------------------------------------------


def _drive_user(
    sensor: SensorClient,
    user_id: str,
    kinds: "list[Genuineness]",
) -> list[dict]:
    """Authenticate once per entry in ``kinds``; returns per-transaction rows."""
    granted: list[bool] = []
    for i, kind in enumerate(kinds):
        response = sensor.authenticate(user_id, f"{user_id}:tx{i}", kind)
        if response.status_code not in (200, 403):
            raise RuntimeError(
                f"authenticate returned {response.status_code}: {response.text}"
            )
        granted.append(response.status_code == 200)
    history = sensor.analytics_rows(user_id)
    if len(history) != len(kinds):
        raise RuntimeError("history length does not match transaction count")
    return [
        {
            "transaction_index": i,
            "fused": row["fused"],
            "level": row["level"],
            "granted": granted[i],
            "kind": kinds[i].value,
        }
        for i, row in enumerate(history)
    ]


def _mix_kinds(transactions: int, good_fraction: float, rng) -> list[Genuineness]:
    return [
        Genuineness.GENUINE if rng.random() < good_fraction else Genuineness.IMPOSTOR
        for _ in range(transactions)
    ]


def run_fig8(
    user_count: int,
    transactions: int,
    good_fraction: float,
    seed: int,
    stack: Stack | None = None,
) -> str:
    """Per-user confidence time series as CSV.

    Columns: transaction_index, fused, level, granted (user_id prepended when
    more than one user runs).
    """
    if transactions < 100:
        raise ValueError("the reported scenario uses at least 100 transactions")
    if not (0.0 <= good_fraction <= 1.0):
        raise ValueError(f"good_fraction {good_fraction} outside [0, 1]")
    own_stack = stack is None
    stack = stack or build_stack()
    rng = np.random.default_rng(seed)
    out = io.StringIO()
    prefix = "user_id," if user_count > 1 else ""
    out.write(f"{prefix}transaction_index,fused,level,granted\n")
    try:
        for u in range(user_count):
            user_id = f"fig8-u{u}"
            response = stack.sensor.enroll(default_profile(user_id, u))
            if response.status_code != 201:
                raise RuntimeError(f"enroll failed: {response.text}")
            kinds = _mix_kinds(transactions, good_fraction, rng)
            for row in _drive_user(stack.sensor, user_id, kinds):
                lead = f"{user_id}," if user_count > 1 else ""
                out.write(
                    f"{lead}{row['transaction_index']},{row['fused']:.4f},"
                    f"{row['level']:.4f},{int(row['granted'])}\n"
                )
    finally:
        if own_stack:
            stack.close()
    return out.getvalue()


# --- six-user scenario ----------------------------------------------------------------


SIX_USER_QUALITY = (1.0, 1.0, 1.0, 1.0, 0.7, 0.0)  # good fraction per user


def run_six_users(
    seed: int, transactions: int = 110, stack: Stack | None = None
) -> dict:
    """Enroll six users and run >= 100 mixed-quality transactions each.

    Four users submit only good samples, one a 70/30 mix, and one is fully
    impostor-substituted. Reports per-user grant rates (overall and after
    EMA warm-up) and validates the BCA chain and the resource replica.
    """
    if transactions < 100:
        raise ValueError("the reported scenario uses more than 100 transactions")
    own_stack = stack is None
    stack = stack or build_stack()
    rng = np.random.default_rng(seed)
    warmup = warmup_transactions(stack.bca_service.config.alpha)
    report: dict = {"users": {}, "warmup": warmup, "transactions": transactions}
    try:
        for u, quality in enumerate(SIX_USER_QUALITY):
            user_id = f"six-u{u}"
            response = stack.sensor.enroll(default_profile(user_id, u))
            if response.status_code != 201:
                raise RuntimeError(f"enroll failed: {response.text}")
            kinds = _mix_kinds(transactions, quality, rng)
            rows = _drive_user(stack.sensor, user_id, kinds)
            grants = [r["granted"] for r in rows]
            post = grants[warmup:]
            report["users"][user_id] = {
                "good_fraction": quality,
                "grant_rate": sum(grants) / len(grants),
                "post_warmup_grant_rate": sum(post) / len(post),
                "final_level": rows[-1]["level"],
                "min_level": min(r["level"] for r in rows),
                "max_level": max(r["level"] for r in rows),
            }
        bca_chain = Chain.from_bytes(
            stack.sensor.chain_bytes(), difficulty=stack.bca_service.config.difficulty
        )
        stack.rs_service.sync_ledger()
        report["ledger_transactions"] = sum(
            len(b.transactions) for b in bca_chain.blocks
        )
        report["chain_length"] = len(bca_chain)
        report["bca_chain_valid"] = validate_chain(bca_chain)
        report["replica_chain_valid"] = validate_chain(stack.rs_service.chain)
        report["replica_length"] = len(stack.rs_service.chain)
    finally:
        if own_stack:
            stack.close()
    return report


# --- threshold calibration --------------------------------------------------------------


def run_fpir_check(finger_threshold: int, trials: int, seed: int) -> dict:
    """Monte Carlo impostor run against the analytic threshold/MAXINT rate."""
    if trials < 100_000:
        raise ValueError("use at least 10^5 trials for a meaningful check")
    rng = np.random.default_rng(seed)
    scores = biosim.impostor_finger_scores(trials, rng)
    false_positives = int((scores < finger_threshold).sum())
    empirical = false_positives / trials
    analytic = expected_fpir(finger_threshold)
    sigma = math.sqrt(trials * analytic * (1.0 - analytic))
    z_score = (false_positives - trials * analytic) / sigma if sigma > 0 else math.inf
    return {
        "finger_threshold": finger_threshold,
        "trials": trials,
        "false_positives": false_positives,
        "empirical_rate": empirical,
        "analytic_rate": analytic,
        "z_score": z_score,
    }


# --- end-to-end protocol flow --------------------------------------------------------------


def run_e2e(seed: int = 0) -> dict:
    """Enrollment, token, and resource access across both servers.

    Also rebuilds a second resource server from a frozen chain snapshot (no
    live BCA connection) and checks it reaches the same verdicts.
    """
    stack = build_stack()
    checks: list[dict] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    try:
        user_id = "e2e-user"
        response = stack.sensor.enroll(default_profile(user_id, seed % 6))
        check("enroll", response.status_code == 201, f"status {response.status_code}")

        auth = stack.sensor.authenticate(
            user_id, f"e2e:{seed}:good", Genuineness.GENUINE,
            audience=stack.rs_service.config.server_id,
        )
        check("genuine_authentication", auth.status_code == 200, auth.text[:120])
        token = auth.json().get("token") if auth.status_code == 200 else None

        granted = stack.rs_client.get(
            "/resource/report", headers={"Authorization": f"Bearer {token}"}
        )
        check("bearer_resource_access", granted.status_code == 200, f"status {granted.status_code}")

        denied_levels = []
        denied = None
        for i in range(8):  # erode a fresh-token user with impostor probes
            denied = stack.sensor.authenticate(
                user_id, f"e2e:{seed}:imp{i}", Genuineness.IMPOSTOR,
                audience=stack.rs_service.config.server_id,
            )
            denied_levels.append(denied.json().get("level"))
            if denied.status_code == 403:
                break
        check(
            "impostor_denied_at_bca",
            denied is not None and denied.status_code == 403,
            f"levels {denied_levels}",
        )

        rogue_key, _pub = generate_keypair()
        now = int(stack.bca_service.clock())
        forged = issue(user_id, 99.0, stack.rs_service.config.server_id, rogue_key, now, gate=80.0)
        rejected = stack.rs_client.get(
            "/resource/report", headers={"Authorization": f"Bearer {forged.to_wire()}"}
        )
        check("forged_token_rejected", rejected.status_code == 401, f"status {rejected.status_code}")

        # replica-only server: frozen snapshot, no route back to the BCA
        snapshot = stack.sensor.chain_bytes()
        replica_cfg = ResourceConfig(
            server_id=stack.rs_service.config.server_id,
            confidence_gate=stack.rs_service.config.confidence_gate,
            difficulty=stack.bca_service.config.difficulty,
            resources=dict(stack.rs_service.config.resources),
        )
        replica_rs = ResourceService(replica_cfg, fetch_chain=lambda: snapshot)
        replica_rs.sync_ledger()
        replica_client = TestClient(create_resource_app(replica_rs))
        same_grant = replica_client.get(
            "/resource/report", headers={"Authorization": f"Bearer {token}"}
        )
        same_reject = replica_client.get(
            "/resource/report", headers={"Authorization": f"Bearer {forged.to_wire()}"}
        )
        check(
            "replica_only_same_verdicts",
            same_grant.status_code == 200 and same_reject.status_code == 401,
            f"grant {same_grant.status_code}, reject {same_reject.status_code}",
        )
        replica_client.close()
    finally:
        stack.close()
    return {"ok": all(c["ok"] for c in checks), "checks": checks}
