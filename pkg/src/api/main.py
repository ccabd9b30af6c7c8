"""
FrozenTime - FastAPI Application

HTTP surface over the pure operations: bounds, certificates, comparisons
and simulations.
"""

import logging
from contextlib import asynccontextmanager
from typing import Any, Dict, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field, model_validator

from ..certificates import (
    CertificateInputs,
    CertificateVariant,
    bound_document,
    compare_conditions,
    inputs_from_document,
    run_certificate,
)
from ..config import settings, setup_logging
from ..exceptions import FrozenTimeError
from ..simulator import collect_certificate_inputs, scenario_from_document, simulate
from ..utils import to_json_text

logger = logging.getLogger(__name__)

# -----------------------------------------------------------------------------
# Pydantic Models
# -----------------------------------------------------------------------------

class BoundRequest(BaseModel):
    """Scalar inputs of the tolerable variation bounds."""
    sigma: float = Field(default=settings.sigma, description="Signal weight sigma")
    sigma0: float = Field(default=settings.sigma0, description="Degree of stability sigma0")
    rho: float = Field(default=settings.rho, description="Contraction rate rho")
    sup_l: float = Field(..., description="sup_t ||l_t||_{sigma0 inf}")
    n_width: int = Field(default=1, description="Averaging width N")
    controller_factor_norm: Optional[float] = Field(default=None, description="For the adaptive plant bound")


class BoundResponse(BaseModel):
    tolerable_variation: float
    zames_wang: float
    adaptive_plant: Optional[float] = None


class CertifyRequest(BaseModel):
    """Certificate inputs document or scenario document, plus the variant to run."""
    inputs: Optional[Dict[str, Any]] = Field(default=None, description="certificate_inputs document")
    scenario: Optional[Dict[str, Any]] = Field(default=None, description="scenario document")
    variant: CertificateVariant = CertificateVariant.COROLLARY2
    n_width: Optional[int] = Field(default=None, ge=1)
    max_gap: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.inputs is None) == (self.scenario is None):
            raise ValueError("give exactly one of 'inputs' or 'scenario'")
        return self

    def certificate_inputs(self) -> CertificateInputs:
        if self.inputs is not None:
            return inputs_from_document(self.inputs)
        return collect_certificate_inputs(scenario_from_document(self.scenario))


def _json(document: Dict[str, Any]) -> Response:
    """Render with the file format conventions (non-finite numbers as strings)."""
    return Response(content=to_json_text(document), media_type="application/json")


# -----------------------------------------------------------------------------
# Application Lifecycle
# -----------------------------------------------------------------------------

@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan management."""
    setup_logging()
    logger.info(f"Starting {settings.app_name} API...")
    yield
    logger.info(f"Shutting down {settings.app_name} API...")


app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Frozen-time stability certificates for time-varying feedback loops",
    lifespan=lifespan
)


# -----------------------------------------------------------------------------
# API Endpoints
# -----------------------------------------------------------------------------

@app.get("/", tags=["General"])
async def root():
    """Root endpoint."""
    return {
        "message": f"Welcome to {settings.app_name}",
        "version": settings.app_version,
        "docs": "/docs",
        "health": "/health"
    }


@app.get("/health", tags=["General"])
async def health_check():
    return {"status": "healthy", "name": settings.app_name, "version": settings.app_version}


@app.post("/bound", response_model=BoundResponse, tags=["Certificates"])
def compute_bound(request: BoundRequest):
    """
    Tolerable variation bounds.

    Example:
    ```json
    {"sigma": 1.2, "sigma0": 1.44, "rho": 0.9, "sup_l": 4.8839}
    ```
    """
    document = bound_document(
        request.sup_l, request.sigma, request.sigma0, request.rho,
        request.n_width, request.controller_factor_norm
    )
    return _json({k: document.get(k) for k in BoundResponse.model_fields})


@app.post("/certify", tags=["Certificates"])
def certify(request: CertifyRequest):
    """Run one certificate variant and return its report."""
    inputs = request.certificate_inputs()
    report = run_certificate(inputs, request.variant, N=request.n_width, max_gap=request.max_gap)
    logger.info(f"{report.variant.value}: {'holds' if report.holds else 'fails'}")
    return _json(report.to_dict())


@app.post("/compare", tags=["Certificates"])
def compare(request: CertifyRequest):
    """Every condition side by side; `variant` is ignored."""
    table = compare_conditions(request.certificate_inputs(), request.n_width, request.max_gap)
    return _json(table.to_dict())


@app.post("/simulate", tags=["Simulation"])
def run_simulation(scenario: Dict[str, Any]):
    """Simulate a scenario document and return the run summary."""
    result = simulate(scenario_from_document(scenario))
    return _json(result.summary())


# -----------------------------------------------------------------------------
# Error Handlers
# -----------------------------------------------------------------------------

@app.exception_handler(FrozenTimeError)
async def frozen_time_exception_handler(request: Request, exc: FrozenTimeError):
    logger.warning(f"Rejected request to {request.url.path}: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(Exception)
async def global_exception_handler(request, exc):
    """Global exception handler."""
    logger.error(f"Unhandled exception: {exc}")
    return JSONResponse(
        status_code=500,
        content={"detail": "Internal server error", "error": str(exc)}
    )


# -----------------------------------------------------------------------------
# Run Application
# -----------------------------------------------------------------------------

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "src.api.main:app",
        host=settings.api_host,
        port=settings.api_port
    )
