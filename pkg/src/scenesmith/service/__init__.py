"""Session-scoped HTTP service."""

from .app import create_app
from .sessions import (
    NotAwaitingAnswer,
    PipelineEvent,
    RunInFlight,
    Session,
    SessionManager,
    UnknownSession,
)

__all__ = [
    "NotAwaitingAnswer",
    "PipelineEvent",
    "RunInFlight",
    "Session",
    "SessionManager",
    "UnknownSession",
    "create_app",
]
