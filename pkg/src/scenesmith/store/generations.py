"""Saved generations: cached scripts with one-sentence summaries.

Layout on disk: one directory per session, one ``<id>.scenescript`` text
file per generation, plus an ``index.json`` listing {id, summary,
created_at, origin_session}. Plain files keep generations inspectable
and diffable.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from ..runtime.entities import Scene
from ..script.compiler import compile_script
from ..script.diagnostics import ExecutionOutcome, ScriptSource
from ..script.executor import execute


class SaveRejected(Exception):
    """The source does not compile; only runnable scripts are stored."""

    def __init__(self, errors):
        super().__init__("generation does not compile:\n" + "\n".join(str(e) for e in errors))
        self.errors = list(errors)


class UnknownId(Exception):
    pass


@dataclass(frozen=True)
class SavedGeneration:
    id: str
    summary: str
    created_at: float
    origin_session: str
    source_text: str


class GenerationStore:
    def __init__(self, root: str | Path, session: str = "default"):
        self.session = session
        self.dir = Path(root) / session
        self.dir.mkdir(parents=True, exist_ok=True)
        self._index_path = self.dir / "index.json"

    def _load_index(self) -> list[dict]:
        if self._index_path.exists():
            return json.loads(self._index_path.read_text(encoding="utf-8"))
        return []

    def _write_index(self, index: list[dict]) -> None:
        self._index_path.write_text(json.dumps(index, indent=1), encoding="utf-8")

    def save(self, source: ScriptSource | str, summary: str) -> str:
        """Persist a script with its summary. Rejects anything that does
        not compile, so reload failures stay exclusively runtime-class."""
        text = source.text if isinstance(source, ScriptSource) else source
        result = compile_script(text)
        if not result.ok:
            raise SaveRejected(result.errors)
        gen_id = uuid.uuid4().hex[:12]
        (self.dir / f"{gen_id}.scenescript").write_text(text, encoding="utf-8")
        index = self._load_index()
        index.append(
            {
                "id": gen_id,
                "summary": summary,
                "created_at": time.time(),
                "origin_session": self.session,
            }
        )
        self._write_index(index)
        return gen_id

    def list(self) -> list[SavedGeneration]:
        out = []
        for rec in self._load_index():
            path = self.dir / f"{rec['id']}.scenescript"
            out.append(
                SavedGeneration(
                    id=rec["id"],
                    summary=rec["summary"],
                    created_at=rec["created_at"],
                    origin_session=rec["origin_session"],
                    source_text=path.read_text(encoding="utf-8"),
                )
            )
        return out

    def get(self, gen_id: str) -> SavedGeneration:
        for gen in self.list():
            if gen.id == gen_id:
                return gen
        raise UnknownId(f"no saved generation {gen_id!r}")

    def reload(self, gen_id: str, scene: Scene) -> ExecutionOutcome:
        """Re-execute a cached script against any scene (the existing one
        or a brand new one) without re-prompting. Name collisions in the
        target scene surface as a RuntimeFailed outcome."""
        gen = self.get(gen_id)
        result = compile_script(ScriptSource(text=gen.source_text, origin="saved", id=gen.id))
        assert result.ok, "stored generations compile by construction"
        return execute(result.program, scene)

    def regenerate(self, gen_id: str, scene: Scene, pipeline) -> "RunResult":
        """The alternative path: rebuild from the stored summary by
        running it through the pipeline as a fresh request."""
        gen = self.get(gen_id)
        return pipeline.run_request(gen.summary, scene)
