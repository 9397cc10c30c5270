"""Pipeline: stage wire formats, memory protocol, build-inspect loop."""

import pytest

from scenesmith.pipeline import (
    ClarifyingQuestion,
    DuplicateSkillId,
    EpisodeStore,
    MemoryMode,
    Pipeline,
    PipelineConfig,
    Skill,
    SkillRegistry,
    config_from_preset,
    load_default_registry,
    trim_memory,
)
from scenesmith.pipeline.episodes import Episode, Instruction, SceneSummary
from scenesmith.providers import ContextOverflow, ScriptedProvider, SpyProvider
from scenesmith.runtime import Scene
from scenesmith.script import ScriptSource, Status

from conftest import build_scene, classify_call, episode_count_in_context

CODE = "```\ncreate box shape=cube\n```"


def make_pipeline(responses, config=None, registry=None):
    provider = SpyProvider(ScriptedProvider(list(responses)))
    pipeline = Pipeline(provider, config or config_from_preset("full LLMR"), registry=registry)
    return pipeline, provider


class TestAnalyzeScene:
    def test_relevant_entity_parsed(self):
        scene = build_scene(
            "create Bear shape=capsule\ncreate Ball shape=sphere\ncreate Table shape=cube"
        )
        pipeline, _ = make_pipeline(["The scene holds Bear, Ball and Table.\nRELEVANT: Bear"])
        summary = pipeline.analyze_scene("Make the bear twice as big", scene)
        assert summary.relevant_entities == ["Bear"]
        assert "Bear" in summary.text
        assert not summary.truncated

    def test_unknown_relevant_names_dropped(self):
        scene = build_scene("create Ball shape=sphere")
        pipeline, _ = make_pipeline(["summary\nRELEVANT: Ball, Ghost"])
        summary = pipeline.analyze_scene("whatever", scene)
        assert summary.relevant_entities == ["Ball"]
        assert any("Ghost" in w for w in pipeline.warnings)

    def test_parse_failure_falls_back_to_raw_text(self):
        pipeline, _ = make_pipeline(["free-form reply without the marker"])
        summary = pipeline.analyze_scene("u", Scene())
        assert summary.text == "free-form reply without the marker"
        assert summary.relevant_entities == []
        assert pipeline.warnings

    def test_truncates_to_top_level_names_over_budget(self):
        script = "\n".join(f"create item{i} shape=cube" for i in range(40))
        scene = build_scene(script)
        config = config_from_preset("full LLMR")
        config.hierarchy_token_budget = 200
        pipeline, provider = make_pipeline(["ok\nRELEVANT: none"], config)
        summary = pipeline.analyze_scene("list things", scene)
        assert summary.truncated
        sent = provider.calls[0][0].messages[1].content
        assert "top_level_entities" in sent
        assert '"item39"' in sent
        assert '"shape"' not in sent  # full hierarchy withheld

    def test_overflow_when_even_names_exceed_budget(self):
        scene = build_scene("\n".join(f"create item{i} shape=cube" for i in range(30)))
        config = config_from_preset("full LLMR")
        config.hierarchy_token_budget = 10
        pipeline, _ = make_pipeline([])
        pipeline.config = config
        with pytest.raises(ContextOverflow):
            pipeline.analyze_scene("u", scene)


class TestPlan:
    def test_numbered_list_becomes_plan(self):
        pipeline, _ = make_pipeline(["1. create the car body\n2. add four wheels\n3. add doors"])
        steps = pipeline.plan("create a car from primitives", SceneSummary(text=""))
        assert steps == ["create the car body", "add four wheels", "add doors"]

    def test_single_step_plan(self):
        pipeline, _ = make_pipeline(["1. create a cube"])
        assert pipeline.plan("create a cube", SceneSummary(text="")) == ["create a cube"]

    def test_question_surfaces(self):
        pipeline, _ = make_pipeline(["QUESTION: which parts should the car have?"])
        result = pipeline.plan("create a car", SceneSummary(text=""))
        assert isinstance(result, ClarifyingQuestion)
        assert "parts" in result.question

    def test_malformed_reply_degrades_to_single_step(self):
        pipeline, _ = make_pipeline(["I would love to help but refuse to number things"])
        steps = pipeline.plan("do the thing", SceneSummary(text=""))
        assert steps == ["do the thing"]
        assert pipeline.warnings


class TestSkills:
    def test_selection_expands_details(self):
        pipeline, _ = make_pipeline(["object-retriever, animation"])
        ids, hint = pipeline.retrieve_skills("create a whale and make it swim happily")
        assert ids == ["object-retriever", "animation"]
        assert "behavior" in hint  # animation details mention behaviors

    def test_none_selection(self):
        pipeline, _ = make_pipeline(["none"])
        ids, hint = pipeline.retrieve_skills("make the box red")
        assert ids == [] and hint == ""

    def test_unknown_id_dropped_with_warning(self):
        pipeline, _ = make_pipeline(["terraforming"])
        ids, hint = pipeline.retrieve_skills("x")
        assert ids == [] and hint == ""
        assert any("terraforming" in w for w in pipeline.warnings)

    def test_register_duplicate_rejected(self):
        registry = SkillRegistry()
        registry.register(Skill(id="s", summary="one", details="d"))
        with pytest.raises(DuplicateSkillId):
            registry.register(Skill(id="s", summary="two", details="d"))

    def test_registered_skill_visible_and_expanded(self):
        registry = load_default_registry()
        registry.register(Skill(id="fireworks", summary="Launch fireworks.", details="FIREWORKS-DETAILS"))
        config = config_from_preset("full LLMR")
        pipeline, provider = make_pipeline(["fireworks"], config, registry=registry)
        ids, hint = pipeline.retrieve_skills("celebrate")
        assert ids == ["fireworks"]
        assert hint == "FIREWORKS-DETAILS"
        system = provider.calls[0][0].messages[0].content
        assert "fireworks: Launch fireworks." in system
        # And the details land verbatim in the next builder context.
        provider.inner.queue.append(CODE)
        pipeline.build("celebrate", SceneSummary(text=""), h=hint)
        builder_ctx = provider.calls[-1][0]
        assert "FIREWORKS-DETAILS" in builder_ctx.messages[-1].content

    def test_summary_length_capped(self):
        with pytest.raises(ValueError):
            Skill(id="long", summary="x" * 201, details="d")


class TestBuild:
    def test_fence_extraction(self):
        pipeline, _ = make_pipeline(["Sure thing:\n```scenescript\ncreate box shape=cube\n```\ndone"])
        source = pipeline.build("u", SceneSummary(text=""))
        assert source.text == "create box shape=cube"
        assert source.origin == "builder"

    def test_no_code_block_raises(self):
        from scenesmith.pipeline import NoCodeBlock

        pipeline, _ = make_pipeline(["I shall not write code today."])
        with pytest.raises(NoCodeBlock):
            pipeline.build("u", SceneSummary(text=""))

    def test_suggestion_appears_after_instruction(self):
        pipeline, provider = make_pipeline([CODE])
        pipeline.build("the instruction", SceneSummary(text="a summary"), r="the suggestion")
        content = provider.calls[0][0].messages[-1].content
        assert content.index("the instruction") < content.index("the suggestion")

    def test_memory_limited_one_shows_exactly_last_episode(self):
        config = config_from_preset("full LLMR")
        pipeline, provider = make_pipeline([CODE], config)
        for k in range(3):
            episode = _episode(f"instruction {k}", f"create e{k} shape=cube")
            pipeline.store.append(episode)
            for module, mode in config.memory_modes.items():
                trim_memory(module, pipeline.store, mode)
        pipeline.build("next one", SceneSummary(text=""))
        ctx = provider.calls[0][0]
        assert episode_count_in_context(ctx) == 1
        assert "instruction 2" in ctx.messages[1].content
        assert "instruction 0" not in "".join(m.content for m in ctx.messages)


class TestInspect:
    def test_compile_error_fails_statically_no_model_call(self):
        pipeline, provider = make_pipeline([])
        verdict = pipeline.inspect("u", SceneSummary(text=""), ScriptSource("set Box scale=(2,2,2", "builder"), Scene())
        assert verdict.verdict == "fail"
        assert verdict.source == "static_check"
        assert "parse" in verdict.suggestion
        assert provider.calls == []

    def test_dry_run_catches_missing_entity(self):
        pipeline, provider = make_pipeline([])
        verdict = pipeline.inspect("u", SceneSummary(text=""), ScriptSource("set ghost color=#FF0000", "builder"), Scene())
        assert verdict.verdict == "fail"
        assert verdict.source == "static_check"
        assert "EntityNotFound" in verdict.suggestion
        assert provider.calls == []

    def test_model_critique_fail(self):
        pipeline, _ = make_pipeline(["FAIL\nLocate the object by its exact name first."])
        verdict = pipeline.inspect(
            "make the bear bigger", SceneSummary(text="scene has Bear"),
            ScriptSource("create bear2 shape=cube", "builder"), Scene(),
        )
        assert verdict.verdict == "fail"
        assert verdict.source == "model_critique"
        assert "exact name" in verdict.suggestion

    def test_model_critique_pass(self):
        pipeline, _ = make_pipeline(["PASS"])
        verdict = pipeline.inspect("u", SceneSummary(text=""), ScriptSource(CODE_PLAIN, "builder"), Scene())
        assert verdict.verdict == "pass" and verdict.suggestion == ""

    def test_provider_failure_degrades_to_static_verdict(self):
        pipeline, _ = make_pipeline([])  # scripted queue empty -> ProviderError
        verdict = pipeline.inspect("u", SceneSummary(text=""), ScriptSource(CODE_PLAIN, "builder"), Scene())
        assert verdict.verdict == "pass"
        assert pipeline.warnings


CODE_PLAIN = "create box shape=cube"


class TestGenerateWithInspection:
    def test_fail_then_pass(self):
        pipeline, provider = make_pipeline(
            [
                "```\ncreate box2 shape=cube\n```",
                "FAIL\nResize the existing box instead of creating a new one.",
                "```\ncreate box shape=cube\n```",
                "PASS",
            ]
        )
        result = pipeline.generate_code_with_inspection("u", SceneSummary(text=""), scene=Scene())
        assert result.code.text == "create box shape=cube"
        assert [a.verdict for a in result.attempts] == ["fail", "pass"]
        assert not result.unverified
        assert len(provider.calls) == 4

    def test_always_fail_returns_last_flagged(self):
        responses = []
        for k in range(3):
            responses.append(f"```\ncreate attempt{k} shape=cube\n```")
            responses.append("FAIL\nStill not right.")
        pipeline, provider = make_pipeline(responses)
        result = pipeline.generate_code_with_inspection("u", SceneSummary(text=""), scene=Scene())
        assert result.unverified
        assert result.code.text == "create attempt2 shape=cube"
        assert len(result.attempts) == 3
        assert len(provider.calls) == 6

    def test_inspector_disabled_single_build(self):
        config = config_from_preset("+SA+SL")
        pipeline, provider = make_pipeline([CODE], config)
        result = pipeline.generate_code_with_inspection("u", SceneSummary(text=""), scene=Scene())
        assert result.code is not None
        assert not result.unverified
        assert len(provider.calls) == 1  # exactly one build, no inspect

    def test_no_code_block_consumes_iteration(self):
        pipeline, provider = make_pipeline(
            ["no code here", "```\ncreate box shape=cube\n```", "PASS"]
        )
        result = pipeline.generate_code_with_inspection("u", SceneSummary(text=""), scene=Scene())
        assert result.code.text == "create box shape=cube"
        assert result.attempts[0].error is not None
        assert len(result.attempts) == 2

    def test_static_check_supremacy(self):
        # Broken code never reaches (or passes) the critique, so a PASS
        # reply queued for it is never consumed.
        pipeline, provider = make_pipeline(
            ["```\ncreate box shape=pyramid\n```", "```\ncreate box shape=cube\n```", "PASS"]
        )
        result = pipeline.generate_code_with_inspection("u", SceneSummary(text=""), scene=Scene())
        assert result.attempts[0].verdict == "fail"
        assert result.attempts[0].source == "static_check"
        assert result.attempts[1].verdict == "pass"


class TestRunRequest:
    def test_planner_disabled_single_step(self):
        config = config_from_preset("few-shot")
        pipeline, provider = make_pipeline([CODE], config)
        result = pipeline.run_request("create a box", Scene())
        assert result.plan == ["create a box"]
        assert len(result.episodes) == 1
        assert result.episodes[0].outcome.status is Status.SUCCESS
        assert len(provider.calls) == 1

    def test_failed_step_continues_with_unchanged_scene(self):
        config = config_from_preset("few-shot")
        config.enable_planner = True
        pipeline, provider = make_pipeline(
            [
                "1. step one\n2. step two\n3. step three",
                "```\ncreate first shape=cube\n```",
                "```\nset ghost color=#FF0000\n```",  # runtime failure
                "```\ncreate third shape=cube\n```",
            ],
            config,
        )
        result = pipeline.run_request("three things", Scene())
        statuses = [e.outcome.status for e in result.episodes]
        assert statuses == [Status.SUCCESS, Status.RUNTIME_FAILED, Status.SUCCESS]
        assert sorted(e.name for e in result.final_scene.entities.values()) == ["first", "third"]

    def test_halt_on_failure(self):
        config = config_from_preset("few-shot")
        config.enable_planner = True
        config.halt_on_failure = True
        pipeline, _ = make_pipeline(
            ["1. a\n2. b", "```\nset ghost color=#FF0000\n```"], config
        )
        result = pipeline.run_request("x", Scene())
        assert len(result.episodes) == 1
        assert result.warnings

    def test_clarifying_question_roundtrip(self):
        config = config_from_preset("full LLMR")
        config.enable_planner = True
        pipeline, _ = make_pipeline(
            [
                "summary\nRELEVANT: none",  # overview analysis
                "QUESTION: what color?",
                "1. create a red cube",  # plan after the answer
                "summary\nRELEVANT: none",  # step analysis
                "none",  # skills
                CODE,
                "PASS",
            ],
            config,
        )
        answers = []

        def ask(question):
            answers.append(question)
            return "red"

        result = pipeline.run_request("make me a cube", Scene(), ask_user=ask)
        assert answers == ["what color?"]
        assert result.plan == ["create a red cube"]
        assert result.episodes[0].outcome.status is Status.SUCCESS

    def test_question_without_channel_degrades(self):
        config = config_from_preset("few-shot")
        config.enable_planner = True
        pipeline, _ = make_pipeline(["QUESTION: hm?", CODE], config)
        result = pipeline.run_request("build it", Scene())
        assert result.plan == ["build it"]
        assert any("question" in w for w in result.warnings)


class TestMemoryProtocol:
    def test_trim_modes(self):
        store = EpisodeStore()
        for k in range(5):
            store.append(_episode(f"i{k}", "create x shape=cube"))
        trim_memory("builder", store, MemoryMode.limited(1))
        assert [e.instruction.text for e in store.visible("builder")] == ["i4"]
        trim_memory("inspector", store, MemoryMode.memoryless())
        assert store.visible("inspector") == []
        trim_memory("planner", store, MemoryMode.full())
        assert len(store.visible("planner")) == 5
        assert len(store.history) == 5  # the log itself never loses episodes

    def test_memoryless_modules_see_zero_episodes_end_to_end(self):
        config = config_from_preset("full LLMR")
        responses = []
        for k in range(3):
            responses += [
                "summary\nRELEVANT: none",
                "none",
                f"```\ncreate box{k} shape=cube\n```",
                "PASS",
            ]
        pipeline, provider = make_pipeline(responses, config)
        scene = Scene()
        for k in range(3):
            scene = pipeline.run_request(f"create box number {k}", scene).final_scene
        for ctx, _ in provider.calls:
            module = classify_call(config, ctx)
            episodes = episode_count_in_context(ctx)
            if module == "builder":
                assert episodes <= 1
            else:
                assert episodes == 0, f"{module} context leaked an episode"
        # Builder saw exactly one prior episode from the second prompt on.
        builder_counts = [
            episode_count_in_context(ctx)
            for ctx, _ in provider.calls
            if classify_call(config, ctx) == "builder"
        ]
        assert builder_counts == [0, 1, 1]


def _episode(instruction_text: str, code_text: str) -> Episode:
    from scenesmith.script.diagnostics import ExecutionOutcome

    return Episode(
        instruction=Instruction(text=instruction_text, index=1, plan_size=1),
        summary=SceneSummary(text=""),
        code=ScriptSource(text=code_text, origin="builder"),
        outcome=ExecutionOutcome(status=Status.SUCCESS, scene_after=Scene()),
    )


class TestConfig:
    def test_presets_toggle_modules(self):
        zero = config_from_preset("zero-shot")
        assert not any([zero.enable_scene_analyzer, zero.enable_skill_library, zero.enable_inspector])
        assert zero.metaprompt_files["builder"] == "builder_zero_shot.txt"
        sa_i = config_from_preset("+SA+I")
        assert sa_i.enable_scene_analyzer and sa_i.enable_inspector and not sa_i.enable_skill_library
        full = config_from_preset("full LLMR")
        assert full.enable_scene_analyzer and full.enable_skill_library and full.enable_inspector
        assert not full.enable_planner  # ablations never score the planner

    def test_fingerprint_stable_and_config_sensitive(self):
        a, b = config_from_preset("full LLMR"), config_from_preset("full LLMR")
        assert a.fingerprint() == b.fingerprint()
        b.max_inspections = 5
        assert a.fingerprint() != b.fingerprint()

    def test_t_must_be_positive(self):
        with pytest.raises(ValueError):
            PipelineConfig(max_inspections=0)

    def test_instruction_index_bounds(self):
        with pytest.raises(ValueError):
            Instruction(text="x", index=0, plan_size=1)
        with pytest.raises(ValueError):
            Instruction(text="x", index=3, plan_size=2)
