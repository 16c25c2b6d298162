"""HTTP service running mining jobs in the background."""

from .app import app, create_app

__all__ = ["app", "create_app"]
