"""Mock registry HTTP service backed by a fixtures file."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from caseboard.errors import CaseboardError
from caseboard.registry.client import LocalRegistry
from caseboard.registry.types import company_to_dict


def create_registry_app(fixtures_path: str) -> FastAPI:
    registry = LocalRegistry(fixtures_path)
    app = FastAPI(title="mock-registry", version="0.1.0")

    @app.exception_handler(CaseboardError)
    async def _error(request: Request, exc: CaseboardError) -> JSONResponse:
        status = 404 if exc.code == "not_found" else 503
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/companies")
    def list_companies() -> dict[str, list[str]]:
        return {"organization_numbers": registry.organization_numbers()}

    @app.get("/companies/{organization_number}")
    def get_company(organization_number: str) -> dict:
        return company_to_dict(registry.fetch_company(organization_number))

    return app
