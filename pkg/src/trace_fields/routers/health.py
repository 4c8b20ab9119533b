"""
Health check endpoints for Trace Fields.
"""

from typing import Any

import numpy as np
import scipy
from fastapi import APIRouter
from pydantic import BaseModel

from .. import __version__
from ..config import Tolerances

router = APIRouter()


class HealthStatus(BaseModel):
    """Health status response model."""

    status: str
    version: str
    checks: dict[str, Any]


@router.get("", response_model=HealthStatus)
async def health_check():
    """
    Health check endpoint.

    Checks:
    - Numerical stack versions
    - Tolerance settings (ordering and positivity)
    """
    checks: dict[str, Any] = {
        "numpy": {"status": "ok", "version": np.__version__},
        "scipy": {"status": "ok", "version": scipy.__version__},
    }
    overall_status = "healthy"

    try:
        checks["tolerances"] = {"status": "ok", **Tolerances.from_settings().model_dump()}
    except ValueError as e:
        checks["tolerances"] = {"status": "error", "error": str(e)}
        overall_status = "degraded"

    return HealthStatus(status=overall_status, version=__version__, checks=checks)


@router.get("/ready")
async def ready_check():
    """Simple readiness check for load balancers."""
    return {"status": "ready"}


@router.get("/live")
async def liveness_check():
    """Simple liveness check for container orchestration."""
    return {"status": "alive"}
