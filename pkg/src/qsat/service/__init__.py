"""HTTP service: FastAPI app plus the handler functions the CLI shares."""

from .app import app

__all__ = ["app"]
