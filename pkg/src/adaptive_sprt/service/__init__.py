"""HTTP service layer: FastAPI app and its pydantic schemas."""

from .app import app

__all__ = ["app"]
