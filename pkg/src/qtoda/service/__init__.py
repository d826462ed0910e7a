"""FastAPI service wrapping the workbench."""

from .app import app

__all__ = ["app"]
