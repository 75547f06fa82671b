"""HTTP API for the human-in-the-loop annotation workflow.

The service binds one corpus file to one decision store.  Reads see the
latest acknowledged snapshot; every mutation is durably appended to the
store before it is acknowledged, and the in-memory view is recomputed by
replaying the effective log over the pristine corpus, so a restart always
reproduces the running state.  The corpus file itself is never rewritten
here; that is the explicit `apply` step.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from reotag.annotation import (
    AnnotationDecision,
    DecisionStore,
    StoreError,
    TrigramTask,
    apply_decisions,
    extract_trigram_tasks,
    record_decision,
    task_statuses,
)
from reotag.corpus import Corpus, LanguageLabel, load_tsv, sentence_to_dict
from reotag.lexicon import LexiconError, LexiconSet, macron_variants


class LexiconUpdateBody(BaseModel):
    word: str
    target: str


class DecisionBody(BaseModel):
    task_id: str | None = None
    assignments: dict[int, str] | None = None
    word: str | None = None
    label: str | None = None
    annotator: str = "anonymous"
    lexicon_update: LexiconUpdateBody | None = None


class WordBody(BaseModel):
    word: str
    target: str = Field(description="maori | english | ambiguous | stopword | foreign")


def _task_payload(task: TrigramTask) -> dict:
    return {
        "task_id": task.task_id,
        "words": list(task.words),
        "count": task.count,
        "ambiguous_positions": sorted(task.ambiguous_positions),
        "samples": list(task.samples),
        "status": task.status,
    }


class AnnotationState:
    """Mutable service state behind a single writer lock."""

    def __init__(
        self,
        corpus_path: str | Path,
        store_path: str | Path,
        lexicon_dir: str | Path | None = None,
        mode: str = "top_k",
        k: int = 20,
        min_count: int = 10,
    ):
        self.lock = threading.Lock()
        self.corpus_path = Path(corpus_path)
        self.pristine: Corpus = load_tsv(self.corpus_path)
        self.store = DecisionStore(store_path)
        self.decisions = self.store.load()
        self.tasks = extract_trigram_tasks(self.pristine, mode=mode, k=k, min_count=min_count)
        self.lexicons = LexiconSet.from_dir(lexicon_dir) if lexicon_dir else None
        self._refresh()

    def _refresh(self) -> None:
        self.view, _ = apply_decisions(self.pristine, self.decisions)
        self.tasks = task_statuses(self.tasks, self.decisions)

    @property
    def task_index(self) -> dict[str, TrigramTask]:
        return {t.task_id: t for t in self.tasks}

    def progress(self) -> dict:
        statuses = [t.status for t in self.tasks]
        return {
            "labels": self.view.counts(),
            "tasks": {
                "total": len(self.tasks),
                "pending": statuses.count("pending"),
                "done": statuses.count("done"),
            },
        }

    def record(self, decision: AnnotationDecision) -> dict:
        with self.lock:
            updated = record_decision(self.store, decision, self.task_index, self.lexicons)
            if updated is not None:
                self.lexicons = updated
            self.decisions.append(decision)
            self._refresh()
            return self.progress()

    def add_word(self, word: str, target: str) -> dict:
        if self.lexicons is None:
            raise LexiconError("service started without a lexicon directory")
        with self.lock:
            persist = target in self.lexicons.paths
            self.lexicons = self.lexicons.add_word(target, word, persist=persist)
            spellings = len(macron_variants(word.casefold())) if target == "maori" else 1
            return {"word": word.casefold(), "target": target, "spellings": spellings}


def _decision_from_body(body: DecisionBody, tasks: dict[str, TrigramTask]) -> AnnotationDecision:
    update = (body.lexicon_update.word, body.lexicon_update.target) if body.lexicon_update else None
    if body.word is not None:
        if not body.label:
            raise ValueError("word-scoped decision needs a label")
        return AnnotationDecision(
            annotator=body.annotator,
            word=body.word.casefold(),
            word_label=LanguageLabel(body.label),
            lexicon_update=update,
        )
    if not body.task_id or not body.assignments:
        raise ValueError("trigram decision needs task_id and assignments")
    task = tasks.get(body.task_id)
    if task is None:
        raise StoreError(f"unknown task {body.task_id!r}")
    return AnnotationDecision(
        annotator=body.annotator,
        words=task.words,
        assignments={p: LanguageLabel(lab) for p, lab in body.assignments.items()},
        lexicon_update=update,
    )


def create_app(
    corpus_path: str | Path,
    store_path: str | Path,
    lexicon_dir: str | Path | None = None,
    mode: str = "top_k",
    k: int = 20,
    min_count: int = 10,
) -> FastAPI:
    """Build the service; raises StoreError (with the offending line) when
    the decision store is corrupt, rather than serving bad state."""
    state = AnnotationState(corpus_path, store_path, lexicon_dir, mode=mode, k=k, min_count=min_count)
    app = FastAPI(title="reotag annotation service")
    app.state.annotation = state

    @app.get("/api/tasks")
    def list_tasks(limit: int = 20, status: str = "pending", mode: str = "top_k", min_count: int = 10):
        if mode not in ("top_k", "min_count"):
            raise HTTPException(status_code=422, detail=f"unknown task mode {mode!r}")
        tasks = [t for t in state.tasks if status in ("all", t.status)]
        if mode == "min_count":
            tasks = [t for t in tasks if t.count >= min_count]
        return {"tasks": [_task_payload(t) for t in tasks[:limit]]}

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str):
        task = state.task_index.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
        return _task_payload(task)

    @app.post("/api/decisions")
    def post_decision(body: DecisionBody):
        try:
            decision = _decision_from_body(body, state.task_index)
            progress = state.record(decision)
        except (StoreError, LexiconError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"ok": True, "progress": progress}

    @app.get("/api/progress")
    def get_progress():
        return state.progress()

    @app.get("/api/sentences/{doc}/{seq}")
    def get_sentence(doc: str, seq: int):
        sentence = state.view.find(doc, seq)
        if sentence is None:
            raise HTTPException(status_code=404, detail=f"no sentence {doc}/{seq}")
        return sentence_to_dict(sentence)

    @app.post("/api/lexicon/words")
    def post_word(body: WordBody):
        try:
            return state.add_word(body.word, body.target)
        except LexiconError as exc:
            status = 409 if "conflict" in str(exc) else 422
            raise HTTPException(status_code=status, detail=str(exc)) from exc

    return app


def serve(
    corpus_path: str | Path,
    store_path: str | Path,
    bind_addr: str = "127.0.0.1:8765",
    lexicon_dir: str | Path | None = None,
) -> None:
    """Run the annotation service until interrupted."""
    import uvicorn

    from reotag.annotation import corpus_lock

    host, _, port = bind_addr.partition(":")
    app = create_app(corpus_path, store_path, lexicon_dir)
    with corpus_lock(corpus_path) as lock:
        # uvicorn re-raises SIGTERM/SIGINT after its graceful shutdown, so
        # release the lock from the app shutdown hook, which does run.
        app.router.on_shutdown.append(lambda: lock.unlink(missing_ok=True))
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8765), log_level="info")
