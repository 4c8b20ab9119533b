"""
FastAPI routers for Trace Fields.
"""

from . import analysis, health

__all__ = ["analysis", "health"]
