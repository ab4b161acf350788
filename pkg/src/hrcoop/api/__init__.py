from .app import create_app
from .manager import ManagedSession, SessionManager

__all__ = ["ManagedSession", "SessionManager", "create_app"]
