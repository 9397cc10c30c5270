"""Chat-completion providers: live, replay, scripted, recording."""

from .adapters import (
    LiveProvider,
    RecordingProvider,
    ReplayProvider,
    ScriptedProvider,
    SpyProvider,
    provider_from_spec,
)
from .base import (
    DEFAULT_WINDOW,
    ChatContext,
    ChatProvider,
    CompletionParams,
    ContextOverflow,
    Message,
    ProviderError,
    ReplayMiss,
    TransportError,
    estimate_tokens,
    request_digest,
    request_hash,
)

__all__ = [
    "ChatContext",
    "ChatProvider",
    "CompletionParams",
    "ContextOverflow",
    "DEFAULT_WINDOW",
    "LiveProvider",
    "Message",
    "ProviderError",
    "RecordingProvider",
    "ReplayMiss",
    "ReplayProvider",
    "ScriptedProvider",
    "SpyProvider",
    "TransportError",
    "estimate_tokens",
    "provider_from_spec",
    "request_digest",
    "request_hash",
]
