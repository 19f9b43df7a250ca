"""HTTP JSON API for the BCA server.

Template payloads travel as base64 of their canonical bytes. Admin routes
require the static bearer secret from the server config. Denials return the
updated confidence level only; per-modality results stay server-side.
"""

from __future__ import annotations

import base64

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from bcauth.biosim import FaceTemplate, FingerTemplate, Gender, UserProfile
from bcauth.bca.service import AuthRequest, BcaService
from bcauth.errors import (
    DuplicateUserError,
    EnrollmentArityError,
    PolicyValidationError,
    TemplateShapeError,
    UnknownUserError,
)
from bcauth.fusion import history_csv
from bcauth.normalization import ThresholdPolicy, expected_fpir


class ProfileModel(BaseModel):
    user_id: str
    name: str
    privileges: list[str] = Field(default_factory=list)
    declared_gender: str
    declared_age: int


class EnrollRequestModel(BaseModel):
    profile: ProfileModel
    finger_templates: list[str]
    face_template: str


class AuthenticateRequestModel(BaseModel):
    user_id: str
    finger_template: str
    face_template: str
    audience: str | None = None


class PolicyModel(BaseModel):
    finger_threshold: int
    face_threshold: float
    gender_threshold: float
    age_tolerance: int
    face_memory_limit_mb: int
    confidence_gate: float


def _decode_b64(text: str, what: str) -> bytes:
    try:
        return base64.b64decode(text.encode("ascii"), validate=True)
    except Exception:
        raise HTTPException(status_code=422, detail=f"{what} is not valid base64")


def _profile(model: ProfileModel) -> UserProfile:
    try:
        gender = Gender(model.declared_gender)
    except ValueError:
        raise HTTPException(
            status_code=422, detail=f"declared_gender must be 'male' or 'female'"
        )
    try:
        return UserProfile(
            user_id=model.user_id,
            name=model.name,
            privileges=tuple(model.privileges),
            declared_gender=gender,
            declared_age=model.declared_age,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app(service: BcaService) -> FastAPI:
    app = FastAPI(title="bcauth BCA server")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.service = service

    def require_admin(authorization: str | None = Header(default=None)) -> None:
        expected = f"Bearer {service.config.admin_secret}"
        if authorization != expected:
            raise HTTPException(status_code=401, detail="admin secret required")

    @app.post("/enroll", status_code=201)
    def enroll(body: EnrollRequestModel):
        try:
            fingers = [
                FingerTemplate.from_bytes(_decode_b64(t, "finger template"))
                for t in body.finger_templates
            ]
            face = FaceTemplate.from_bytes(_decode_b64(body.face_template, "face template"))
        except TemplateShapeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            record = service.enroll(_profile(body.profile), fingers, face)
        except EnrollmentArityError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except DuplicateUserError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "user_id": record.profile.user_id,
            "block_index": record.ledger_tx_ref[0],
            "tx_position": record.ledger_tx_ref[1],
            "created_at": record.created_at,
        }

    @app.post("/authenticate")
    def authenticate(body: AuthenticateRequestModel):
        try:
            request = AuthRequest(
                user_id=body.user_id,
                finger_probe=FingerTemplate.from_bytes(
                    _decode_b64(body.finger_template, "finger template")
                ),
                face_probe=FaceTemplate.from_bytes(
                    _decode_b64(body.face_template, "face template")
                ),
            )
        except TemplateShapeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            outcome = service.authenticate(request, audience=body.audience)
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if not outcome.granted:
            return JSONResponse(status_code=403, content={"level": outcome.level})
        return {
            "token": outcome.wire_token,
            "level": outcome.level,
            "expires_at": outcome.token.claims.expires_at,
        }

    @app.get("/confidence/{user_id}")
    def confidence(user_id: str, limit: int = Query(default=50, ge=1, le=1000)):
        try:
            return service.get_confidence(user_id, limit=limit)
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/chain")
    def chain_bytes():
        return Response(
            content=service.chain.to_bytes(), media_type="application/octet-stream"
        )

    @app.get("/chain/head")
    def chain_head():
        head = service.chain.head()
        if head is None:
            return {"index": -1, "hash": ""}
        return {"index": head.index, "hash": head.hash.hex()}

    @app.get("/admin/policy", dependencies=[Depends(require_admin)])
    def get_policy():
        policy = service.policy
        return {
            **policy.to_dict(),
            "expected_fpir": expected_fpir(policy.finger_threshold),
        }

    @app.put("/admin/policy", dependencies=[Depends(require_admin)])
    def put_policy(body: PolicyModel):
        try:
            policy = ThresholdPolicy(**body.model_dump())
        except PolicyValidationError as exc:
            raise HTTPException(
                status_code=422,
                detail={"message": "invalid policy", "fields": exc.field_errors},
            )
        service.set_policy(policy)
        return {
            **policy.to_dict(),
            "expected_fpir": expected_fpir(policy.finger_threshold),
        }

    @app.get("/admin/users", dependencies=[Depends(require_admin)])
    def list_users():
        return service.list_users()

    @app.delete("/admin/users/{user_id}", status_code=204, dependencies=[Depends(require_admin)])
    def delete_user(user_id: str):
        try:
            service.delete_user(user_id)
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(status_code=204)

    @app.get("/admin/analytics", dependencies=[Depends(require_admin)])
    def analytics(user: str, format: str = Query(default="json", pattern="^(json|csv)$")):
        try:
            record = service.analytics(user)
        except UnknownUserError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if format == "csv":
            return PlainTextResponse(history_csv(record), media_type="text/csv")
        return {
            "user_id": user,
            "level": record.level,
            "gate": service.policy.confidence_gate,
            "history": [
                {
                    "timestamp": u.timestamp,
                    "fused": u.fused,
                    "level": u.level,
                    **u.vector.to_dict(),
                }
                for u in record.history
            ],
        }

    return app
