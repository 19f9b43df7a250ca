"""HTTP surface of the resource server: one bearer-guarded resource route."""

from __future__ import annotations

from fastapi import FastAPI, Header
from fastapi.responses import JSONResponse

from bcauth.resource.service import ResourceService


def create_app(service: ResourceService) -> FastAPI:
    app = FastAPI(title=f"bcauth resource server {service.config.server_id}")
    app.state.service = service

    @app.get("/resource/{resource_id}")
    def get_resource(resource_id: str, authorization: str | None = Header(default=None)):
        bearer = None
        if authorization and authorization.lower().startswith("bearer "):
            bearer = authorization[7:].strip()
        result = service.serve(resource_id, bearer)
        if result.status == 200:
            return {"resource_id": resource_id, "payload": result.payload}
        # denials carry no confidence level
        return JSONResponse(status_code=result.status, content={"detail": result.reason})

    @app.get("/healthz")
    def healthz():
        return {"server_id": service.config.server_id, "chain_length": len(service.chain)}

    return app
