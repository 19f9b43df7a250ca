"""Black-box client for the BCA HTTP API plus the sensor-side simulation.

The client plays the role of the capture device: it derives templates and
probes from seeds with the biometric simulator and submits them over the
public API. It never touches server internals; the admin secret is only
used for the documented admin routes.
"""

from __future__ import annotations

import base64

import httpx

from bcauth import biosim
from bcauth.biosim import Gender, Genuineness, SimConfig, UserProfile


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


class SensorClient:
    def __init__(self, http: httpx.Client, sim: SimConfig, admin_secret: str | None = None):
        self.http = http
        self.sim = sim
        self.admin_secret = admin_secret

    # -- seed conventions -------------------------------------------------------

    @staticmethod
    def finger_seed(user_id: str) -> str:
        return f"{user_id}:finger"

    @staticmethod
    def face_seed(user_id: str) -> str:
        return f"{user_id}:face"

    # -- enrollment ----------------------------------------------------------------

    def enroll(self, profile: UserProfile) -> httpx.Response:
        fingers = biosim.enroll_finger(
            [self.finger_seed(profile.user_id)] * 4, profile, self.sim
        )
        face = biosim.enroll_face(self.face_seed(profile.user_id), self.sim)
        return self.http.post(
            "/enroll",
            json={
                "profile": {
                    "user_id": profile.user_id,
                    "name": profile.name,
                    "privileges": list(profile.privileges),
                    "declared_gender": profile.declared_gender.value,
                    "declared_age": profile.declared_age,
                },
                "finger_templates": [_b64(t.to_bytes()) for t in fingers],
                "face_template": _b64(face.to_bytes()),
            },
        )

    # -- authentication ---------------------------------------------------------------

    def authenticate(
        self,
        user_id: str,
        probe_seed: str,
        genuineness: Genuineness = Genuineness.GENUINE,
        noise_level: float = 0.0,
        audience: str | None = None,
    ) -> httpx.Response:
        finger = biosim.make_finger_probe(
            self.finger_seed(user_id), probe_seed, genuineness, noise_level, self.sim
        )
        face = biosim.make_face_probe(
            biosim.enroll_face(self.face_seed(user_id), self.sim),
            probe_seed,
            genuineness,
            noise_level,
            self.sim,
        )
        body = {
            "user_id": user_id,
            "finger_template": _b64(finger.payload.to_bytes()),
            "face_template": _b64(face.payload.to_bytes()),
        }
        if audience is not None:
            body["audience"] = audience
        return self.http.post("/authenticate", json=body)

    # -- queries --------------------------------------------------------------------

    def confidence(self, user_id: str) -> httpx.Response:
        return self.http.get(f"/confidence/{user_id}")

    def _admin_headers(self) -> dict[str, str]:
        if self.admin_secret is None:
            raise ValueError("admin secret not configured")
        return {"Authorization": f"Bearer {self.admin_secret}"}

    def analytics_rows(self, user_id: str) -> list[dict]:
        response = self.http.get(
            "/admin/analytics", params={"user": user_id}, headers=self._admin_headers()
        )
        response.raise_for_status()
        return response.json()["history"]

    def chain_bytes(self) -> bytes:
        response = self.http.get("/chain")
        response.raise_for_status()
        return response.content


def default_profile(user_id: str, index: int = 0) -> UserProfile:
    """Deterministic synthetic profile for generated populations."""
    gender = Gender.MALE if index % 2 == 0 else Gender.FEMALE
    return UserProfile(
        user_id=user_id,
        name=f"Simulated User {index}",
        privileges=("read",),
        declared_gender=gender,
        declared_age=25 + (index * 7) % 50,
    )
