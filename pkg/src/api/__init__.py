"""
FrozenTime - API Module

FastAPI-based REST API over the certificate and simulation operations.
"""

from .main import app

__all__ = ["app"]
