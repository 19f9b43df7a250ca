"""The service provider: serves protected resources to bearers of valid
tokens, verifying them against a ledger replica synced from the BCA."""

from bcauth.resource.service import ResourceConfig, ResourceService, ServeResult
from bcauth.resource.api import create_app

__all__ = ["ResourceConfig", "ResourceService", "ServeResult", "create_app"]
