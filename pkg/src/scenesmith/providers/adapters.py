"""Provider adapters: scripted (FIFO), replay, recording, live HTTP, spy."""

from __future__ import annotations

import json
import os
from pathlib import Path
from .base import (
    ChatContext,
    ChatProvider,
    CompletionParams,
    ProviderError,
    ReplayMiss,
    TransportError,
    request_digest,
    request_hash,
)


class ScriptedProvider(ChatProvider):
    """Returns queued responses first-in first-out. For tests and fixture
    recording, where call order is fully determined."""

    def __init__(self, responses: list[str], window: int = 10**9):
        super().__init__(window)
        self.queue = list(responses)
        self.calls: list[ChatContext] = []

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        self.calls.append(context)
        if not self.queue:
            raise ProviderError("scripted provider ran out of responses")
        return self.queue.pop(0)


class ReplayProvider(ChatProvider):
    """Replays recorded responses keyed by the request hash. A miss is a
    hard error: offline runs must be byte-for-byte reproducible."""

    def __init__(self, fixture_path: str | Path, window: int = 10**9):
        super().__init__(window)
        self.fixture_path = Path(fixture_path)
        records = json.loads(self.fixture_path.read_text(encoding="utf-8"))
        self.responses: dict[str, str] = {
            rec["request_hash"]: rec["response_text"] for rec in records
        }

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        key = request_hash(context, params)
        if key not in self.responses:
            raise ReplayMiss(
                f"no recorded response for request {key[:12]}... ({request_digest(context)})"
            )
        return self.responses[key]


class RecordingProvider(ChatProvider):
    """Wraps another provider and appends every exchange to a fixture file
    that ReplayProvider understands."""

    def __init__(self, inner: ChatProvider, fixture_path: str | Path):
        super().__init__(inner.window)
        self.inner = inner
        self.fixture_path = Path(fixture_path)
        self.records: list[dict] = []
        if self.fixture_path.exists():
            self.records = json.loads(self.fixture_path.read_text(encoding="utf-8"))

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        text = self.inner.complete(context, params)
        self.records.append(
            {
                "request_hash": request_hash(context, params),
                "request_digest": request_digest(context),
                "response_text": text,
            }
        )
        self.fixture_path.parent.mkdir(parents=True, exist_ok=True)
        self.fixture_path.write_text(json.dumps(self.records, indent=1), encoding="utf-8")
        return text


class SpyProvider(ChatProvider):
    """Test double that records every (context, params) pair passing
    through to the wrapped provider."""

    def __init__(self, inner: ChatProvider):
        super().__init__(inner.window)
        self.inner = inner
        self.calls: list[tuple[ChatContext, CompletionParams]] = []

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        self.calls.append((context, params))
        return self.inner.complete(context, params)


class LiveProvider(ChatProvider):
    """OpenAI-compatible chat-completions endpoint over HTTP.

    The credential is read from the environment variable named at
    construction; it is never persisted anywhere.
    """

    def __init__(
        self,
        endpoint: str,
        model_id: str = "gpt-4",
        credential_env: str = "SCENESMITH_API_KEY",
        window: int = 8000,
    ):
        super().__init__(window)
        self.endpoint = endpoint.rstrip("/")
        self.model_id = model_id
        self.credential_env = credential_env

    def _complete(self, context: ChatContext, params: CompletionParams) -> str:
        import httpx

        key = os.environ.get(self.credential_env, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        body = {
            "model": params.model_id if params.model_id != "default" else self.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in context.messages],
            "temperature": params.temperature,
            "max_tokens": params.max_output_tokens,
        }
        try:
            resp = httpx.post(
                f"{self.endpoint}/chat/completions",
                json=body,
                headers=headers,
                timeout=params.timeout,
            )
            resp.raise_for_status()
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise TransportError(f"chat completion failed: {exc}") from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"malformed completion response: {exc}") from exc


def provider_from_spec(spec: str, window: int = 8000) -> ChatProvider:
    """Build a provider from a CLI-style spec string.

    Forms: ``replay:<fixture path>``, ``live:<endpoint url>[,model,<id>]``,
    ``scripted:<json file with a list of responses>``.
    """
    kind, _, rest = spec.partition(":")
    if kind == "replay":
        return ReplayProvider(rest, window=window)
    if kind == "scripted":
        return ScriptedProvider(json.loads(Path(rest).read_text(encoding="utf-8")), window=window)
    if kind == "live":
        parts = rest.split(",model,")
        endpoint = parts[0]
        model = parts[1] if len(parts) > 1 else "gpt-4"
        return LiveProvider(endpoint, model_id=model, window=window)
    raise ValueError(f"unknown provider spec {spec!r}")
