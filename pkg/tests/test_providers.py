"""Provider layer: token estimation, budget guard, record/replay."""

import json

import pytest

from scenesmith.providers import (
    ChatContext,
    CompletionParams,
    ContextOverflow,
    Message,
    RecordingProvider,
    ReplayMiss,
    ReplayProvider,
    ScriptedProvider,
    estimate_tokens,
    request_hash,
)


class TestEstimateTokens:
    def test_empty_message_floor(self):
        assert estimate_tokens("") == 1

    def test_300_byte_message(self):
        assert estimate_tokens("x" * 300) == 101

    def test_two_three_byte_messages(self):
        ctx = ChatContext([Message("user", "abc"), Message("assistant", "def")])
        assert ctx.token_estimate == 4

    def test_multibyte_counted_as_bytes(self):
        # 3 characters, 9 UTF-8 bytes
        assert estimate_tokens("日本語") == 4


class TestMessages:
    def test_empty_content_rejected(self):
        with pytest.raises(ValueError):
            Message("user", "")

    def test_unknown_role_rejected(self):
        with pytest.raises(ValueError):
            Message("narrator", "hi")

    def test_system_must_come_first(self):
        with pytest.raises(ValueError):
            ChatContext([Message("user", "hi"), Message("system", "meta")])
        ChatContext([Message("system", "meta"), Message("user", "hi")])  # fine
        ChatContext([Message("user", "uncontextualized")])  # fine: no metaprompt at all


class TestScripted:
    def test_fifo_order(self):
        provider = ScriptedProvider(["A", "B"])
        ctx = ChatContext([Message("user", "x")])
        assert provider.complete(ctx) == "A"
        assert provider.complete(ctx) == "B"

    def test_budget_guard_blocks_before_any_call(self):
        provider = ScriptedProvider(["A"], window=10)
        ctx = ChatContext([Message("user", "x" * 300)])
        with pytest.raises(ContextOverflow):
            provider.complete(ctx, CompletionParams(max_output_tokens=5))
        assert provider.calls == []  # nothing was issued


class TestReplay:
    def test_record_then_replay_byte_for_byte(self, tmp_path):
        fixture = tmp_path / "session.json"
        recorder = RecordingProvider(ScriptedProvider(["PLAN:\n1. create a cube"]), fixture)
        ctx = ChatContext([Message("system", "meta"), Message("user", "plan this")])
        original = recorder.complete(ctx)

        replay = ReplayProvider(fixture)
        assert replay.complete(ctx) == original
        # Identical context again: identical output, any number of times.
        assert replay.complete(ctx) == original

    def test_replay_miss_is_hard_error(self, tmp_path):
        fixture = tmp_path / "session.json"
        fixture.write_text("[]")
        replay = ReplayProvider(fixture)
        with pytest.raises(ReplayMiss):
            replay.complete(ChatContext([Message("user", "never recorded")]))

    def test_fixture_records_have_digests(self, tmp_path):
        fixture = tmp_path / "session.json"
        recorder = RecordingProvider(ScriptedProvider(["ok"]), fixture)
        recorder.complete(ChatContext([Message("system", "sys line"), Message("user", "hello")]))
        records = json.loads(fixture.read_text())
        assert set(records[0]) == {"request_hash", "request_digest", "response_text"}
        assert "sys line" in records[0]["request_digest"]


class TestRequestHash:
    def test_stable_and_sensitive(self):
        ctx = ChatContext([Message("user", "hi")])
        p = CompletionParams(model_id="m", temperature=0.0)
        assert request_hash(ctx, p) == request_hash(ctx, p)
        assert request_hash(ctx, p) != request_hash(ctx, CompletionParams(model_id="m", temperature=0.5))
        assert request_hash(ctx, p) != request_hash(
            ChatContext([Message("user", "hi!")]), p
        )
