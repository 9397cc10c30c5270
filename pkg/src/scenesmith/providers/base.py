"""Chat-completion interface every language-model-backed module runs on."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

ROLES = ("system", "user", "assistant")

DEFAULT_WINDOW = 8000  # estimated tokens; the smaller published context size


class ProviderError(Exception):
    pass


class ContextOverflow(ProviderError):
    """Estimated input + output tokens would exceed the context window."""


class TransportError(ProviderError):
    """Live endpoint unreachable or returned a failure."""


class ReplayMiss(ProviderError):
    """No recorded response for this request."""


def estimate_tokens(text: str) -> int:
    """Deterministic, overestimate-leaning token count: ceil(bytes/3) + 1.

    A budgeting heuristic, never an exact tokenizer count.
    """
    return math.ceil(len(text.encode("utf-8")) / 3) + 1


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


@dataclass
class ChatContext:
    """An ordered message window. If a system (metaprompt) message is
    present it must come first."""

    messages: list[Message] = field(default_factory=list)

    def __post_init__(self) -> None:
        for i, msg in enumerate(self.messages):
            if msg.role == "system" and i != 0:
                raise ValueError("the system/metaprompt message must come first")

    @property
    def token_estimate(self) -> int:
        return sum(estimate_tokens(m.content) for m in self.messages)


@dataclass(frozen=True)
class CompletionParams:
    model_id: str = "default"
    temperature: float = 0.0  # every module runs greedy by default
    max_output_tokens: int = 1024
    timeout: float = 60.0


def request_hash(context: ChatContext, params: CompletionParams) -> str:
    """Stable key for record/replay: hash of messages, model, temperature."""
    payload = {
        "messages": [[m.role, m.content] for m in context.messages],
        "model": params.model_id,
        "temperature": params.temperature,
    }
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def request_digest(context: ChatContext) -> str:
    """Short human-readable hint stored next to each recorded response."""
    last = context.messages[-1].content if context.messages else ""
    head = context.messages[0].content.splitlines()[0] if context.messages else ""
    return f"{head[:60]} | {last[:80]}"


class ChatProvider:
    """Base adapter. Subclasses implement ``_complete``; the public
    ``complete`` enforces the window budget before anything else runs."""

    def __init__(self, window: int = DEFAULT_WINDOW):
        self.window = window

    def complete(self, context: ChatContext, params: CompletionParams | None = None) -> str:
        params = params or CompletionParams()
        needed = context.token_estimate + params.max_output_tokens
        if needed > self.window:
            raise ContextOverflow(
                f"estimated {needed} tokens exceeds the {self.window}-token window"
            )
        return self._complete(context, params)

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        raise NotImplementedError
