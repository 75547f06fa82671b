"""Human annotation of the ambiguous/unclear residue.

Trigram tasks are mined from the corpus (ranked windows of three word
tokens containing at least one ambiguous word), human decisions land in an
append-only JSON-lines store, and applying the store relabels every
occurrence corpus-wide.  The store is the source of truth: replaying it
from an empty state reproduces task statuses and corpus labels exactly.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    StageDelta,
    label_counts,
)
from reotag.lexicon import LexiconSet

DECIDABLE_LABELS = (LanguageLabel.MAORI, LanguageLabel.ENGLISH, LanguageLabel.FOREIGN)


class StoreError(ValueError):
    """The decision store is unreadable or a record is malformed."""


def trigram_task_id(words: Sequence[str]) -> str:
    digest = hashlib.sha1("\x1f".join(words).encode("utf-8")).hexdigest()
    return "tg-" + digest[:12]


@dataclass(frozen=True)
class TrigramTask:
    """One ranked annotation task: a word trigram with ambiguous members."""

    task_id: str
    words: tuple[str, str, str]
    count: int
    ambiguous_positions: frozenset[int]
    samples: tuple[str, ...] = ()
    status: str = "pending"

    def with_status(self, status: str) -> "TrigramTask":
        return replace(self, status=status)


@dataclass(frozen=True)
class AnnotationDecision:
    """A persisted human judgement, trigram- or word-scoped.

    Trigram decisions assign labels to positions 1..3 of a trigram; word
    decisions relabel every ambiguous/unclear occurrence of one word.
    Decisions are append-only; a later decision for the same scope
    supersedes the earlier one everywhere.
    """

    annotator: str = "anonymous"
    timestamp: str = ""
    words: tuple[str, str, str] | None = None
    assignments: dict[int, LanguageLabel] = field(default_factory=dict)
    word: str | None = None
    word_label: LanguageLabel | None = None
    lexicon_update: tuple[str, str] | None = None

    def __post_init__(self):
        if (self.words is None) == (self.word is None):
            raise ValueError("decision must be either trigram-scoped or word-scoped")
        if self.words is not None and not self.assignments:
            raise ValueError("trigram decision carries no assignments")
        if self.word is not None and self.word_label is None:
            raise ValueError("word decision carries no label")
        for label in list(self.assignments.values()) + ([self.word_label] if self.word_label else []):
            if label not in DECIDABLE_LABELS:
                raise ValueError(f"annotators assign M, P or F, not {label.value}")
        if not self.timestamp:
            object.__setattr__(self, "timestamp", dt.datetime.now(dt.timezone.utc).isoformat())

    @property
    def scope(self) -> str:
        return "trigram" if self.words is not None else "word"

    @property
    def key(self) -> tuple:
        if self.words is not None:
            return ("trigram", self.words)
        return ("word", self.word)

    @property
    def task_id(self) -> str | None:
        return trigram_task_id(self.words) if self.words is not None else None

    def to_json(self) -> str:
        obj: dict = {"scope": self.scope, "annotator": self.annotator, "timestamp": self.timestamp}
        if self.words is not None:
            obj["task_id"] = self.task_id
            obj["words"] = list(self.words)
            obj["assignments"] = {str(p): lab.value for p, lab in sorted(self.assignments.items())}
        else:
            obj["word"] = self.word
            obj["label"] = self.word_label.value
        if self.lexicon_update:
            obj["lexicon_update"] = {"word": self.lexicon_update[0], "target": self.lexicon_update[1]}
        return json.dumps(obj, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, raw: str) -> "AnnotationDecision":
        obj = json.loads(raw)
        update = None
        if obj.get("lexicon_update"):
            update = (obj["lexicon_update"]["word"], obj["lexicon_update"]["target"])
        common = dict(
            annotator=obj.get("annotator", "anonymous"),
            timestamp=obj.get("timestamp", ""),
            lexicon_update=update,
        )
        if obj.get("scope") == "trigram" or "words" in obj:
            words = tuple(obj["words"])
            if len(words) != 3:
                raise ValueError(f"trigram decision needs 3 words, got {len(words)}")
            assignments = {int(p): LanguageLabel(lab) for p, lab in obj["assignments"].items()}
            return cls(words=words, assignments=assignments, **common)
        return cls(word=obj["word"], word_label=LanguageLabel(obj["label"]), **common)


class DecisionStore:
    """Append-only JSON-lines decision log; one decision per line."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def load(self) -> list[AnnotationDecision]:
        """Parse the full log; a malformed line is a hard error that names
        the offending line."""
        if not self.path.exists():
            return []
        decisions = []
        try:
            raw = self.path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise StoreError(f"cannot read decision store {self.path}: {exc}") from exc
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                decisions.append(AnnotationDecision.from_json(line))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise StoreError(f"{self.path}:{lineno}: corrupt decision record: {line!r} ({exc})") from exc
        return decisions

    def append(self, decision: AnnotationDecision) -> None:
        """Durably append one record (flushed and fsynced before return)."""
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(decision.to_json() + "\n")
            fh.flush()
            os.fsync(fh.fileno())


def _word_windows(sentence: LabelledSentence):
    words = [(i, t) for i, t in enumerate(sentence.tokens) if t.is_word]
    for w in range(len(words) - 2):
        yield words[w], words[w + 1], words[w + 2]


def extract_trigram_tasks(
    corpus: Corpus,
    mode: str = "top_k",
    k: int = 20,
    min_count: int = 10,
    sample_limit: int = 5,
) -> list[TrigramTask]:
    """Mine ranked trigram tasks from the ambiguous residue.

    A window is three consecutive word tokens within one sentence (N/S
    tokens excluded, no cross-sentence windows), lowercased.  Windows with
    at least one A token qualify; identical word triples aggregate.
    Ranking is count descending with a lexicographic tie-break.  mode
    "top_k" keeps the first k tasks, "min_count" those with count >=
    min_count.
    """
    if mode not in ("top_k", "min_count"):
        raise ValueError(f"unknown task mode {mode!r}")
    counts: dict[tuple[str, str, str], int] = {}
    positions: dict[tuple[str, str, str], set[int]] = {}
    samples: dict[tuple[str, str, str], list[str]] = {}
    sampled_keys: dict[tuple[str, str, str], set[tuple[str, int]]] = {}
    for sentence in corpus.sentences:
        for window in _word_windows(sentence):
            tokens = [t for _, t in window]
            ambiguous = {p for p, t in enumerate(tokens, start=1) if t.label is LanguageLabel.AMBIGUOUS}
            if not ambiguous:
                continue
            triple = (tokens[0].lower, tokens[1].lower, tokens[2].lower)
            counts[triple] = counts.get(triple, 0) + 1
            positions.setdefault(triple, set()).update(ambiguous)
            seen = sampled_keys.setdefault(triple, set())
            if len(samples.setdefault(triple, [])) < sample_limit and (sentence.doc_id, sentence.seq) not in seen:
                samples[triple].append(sentence.text)
                seen.add((sentence.doc_id, sentence.seq))
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    if mode == "top_k":
        ranked = ranked[:k]
    else:
        ranked = [(triple, n) for triple, n in ranked if n >= min_count]
    return [
        TrigramTask(
            task_id=trigram_task_id(triple),
            words=triple,
            count=n,
            ambiguous_positions=frozenset(positions[triple]),
            samples=tuple(samples[triple]),
        )
        for triple, n in ranked
    ]


def task_statuses(tasks: Iterable[TrigramTask], decisions: Iterable[AnnotationDecision]) -> list[TrigramTask]:
    """Mark tasks done when the store holds a decision for their trigram."""
    decided = {d.words for d in decisions if d.words is not None}
    return [t.with_status("done") if t.words in decided else t for t in tasks]


def record_decision(
    store: DecisionStore,
    decision: AnnotationDecision,
    tasks: dict[str, TrigramTask] | None = None,
    lexicons: LexiconSet | None = None,
) -> LexiconSet | None:
    """Validate and durably append a decision.

    When the live task index is supplied, a trigram decision must name a
    known task and may only assign its ambiguous positions (a decision on
    a done task is a superseding append, latest wins).  A lexicon update
    riding on the decision is applied, persisted, and the updated snapshot
    returned.
    """
    if decision.words is not None and tasks is not None:
        task = tasks.get(decision.task_id or "")
        if task is None:
            raise StoreError(f"unknown task {decision.task_id!r} for trigram {decision.words}")
        bad = set(decision.assignments) - set(task.ambiguous_positions)
        if bad:
            raise StoreError(
                f"positions {sorted(bad)} of task {task.task_id} are not ambiguous "
                f"(ambiguous positions: {sorted(task.ambiguous_positions)})"
            )
    store.append(decision)
    if decision.lexicon_update and lexicons is not None:
        word, target = decision.lexicon_update
        return lexicons.add_word(target, word, persist=target in lexicons.paths)
    return lexicons


def effective_decisions(decisions: Iterable[AnnotationDecision]) -> list[AnnotationDecision]:
    """Reduce the log latest-wins per scope key, preserving log order."""
    reduced: dict[tuple, AnnotationDecision] = {}
    for d in decisions:
        reduced.pop(d.key, None)
        reduced[d.key] = d
    return list(reduced.values())


def apply_decisions(
    corpus: Corpus,
    store: DecisionStore | Iterable[AnnotationDecision],
    stage: str = "apply-decisions",
) -> tuple[Corpus, StageDelta]:
    """Relabel the corpus from the decision log.

    Trigram decisions overwrite the A tokens at their decided positions in
    every occurrence; word decisions relabel every A/U occurrence of the
    word.  Eligibility is judged against the labels at call time, so
    applying the same store twice is a no-op the second time.  When
    decisions overlap on a token, the one later in the log wins.
    """
    decisions = store.load() if isinstance(store, DecisionStore) else list(store)
    rules = effective_decisions(decisions)
    before = corpus.counts()
    changed = 0
    sentences = []
    for sentence in corpus.sentences:
        targets: dict[int, LanguageLabel] = {}
        words = [(i, t) for i, t in enumerate(sentence.tokens) if t.is_word]
        for rule in rules:
            if rule.words is not None:
                for w in range(len(words) - 2):
                    triple = (words[w][1].lower, words[w + 1][1].lower, words[w + 2][1].lower)
                    if triple != rule.words:
                        continue
                    for pos, label in rule.assignments.items():
                        idx, tok = words[w + pos - 1]
                        if tok.label is LanguageLabel.AMBIGUOUS:
                            targets[idx] = label
            else:
                for idx, tok in words:
                    if tok.lower == rule.word and tok.label in (
                        LanguageLabel.AMBIGUOUS,
                        LanguageLabel.UNCLEAR,
                    ):
                        targets[idx] = rule.word_label  # type: ignore[assignment]
        if not targets:
            sentences.append(sentence)
            continue
        new_tokens = [
            t.with_label(targets[i]) if i in targets else t for i, t in enumerate(sentence.tokens)
        ]
        changed += sum(1 for old, new in zip(sentence.tokens, new_tokens) if old.label is not new.label)
        sentences.append(sentence.with_tokens(new_tokens))
    after = label_counts(sentences)
    delta = StageDelta(stage, before, after, changed)
    return corpus.with_sentences(sentences, delta), delta


def foreign_decisions(lexicons: LexiconSet) -> list[AnnotationDecision]:
    """Synthesize word-scoped F decisions from the foreign word list.

    This is the lookup route by which past foreign judgements re-apply to
    a rebuilt corpus; together with human decisions it is the only way a
    token becomes F.
    """
    return [
        AnnotationDecision(annotator="foreign-list", word=w, word_label=LanguageLabel.FOREIGN)
        for w in sorted(lexicons.foreign.entries)
    ]


def mark_foreign(
    store: DecisionStore,
    word: str,
    annotator: str = "anonymous",
    lexicons: LexiconSet | None = None,
    update_lexicon: bool = True,
) -> LexiconSet | None:
    """Word-scoped convenience: record that a word is foreign (F).

    By default the word is also fed to the foreign word list, so future
    corpora inherit the judgement.
    """
    decision = AnnotationDecision(
        annotator=annotator,
        word=word.casefold(),
        word_label=LanguageLabel.FOREIGN,
        lexicon_update=(word.casefold(), "foreign") if update_lexicon else None,
    )
    return record_decision(store, decision, lexicons=lexicons)


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


def acquire_corpus_lock(corpus_path: str | Path) -> Path:
    """Take the per-corpus lock file, clearing a stale one whose owner
    process is gone (a killed server cannot release it itself)."""
    lock = Path(str(corpus_path) + ".lock")
    while True:
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            try:
                pid = int(lock.read_text().strip() or "0")
            except (OSError, ValueError):
                pid = 0
            if pid and not _pid_alive(pid):
                logging.getLogger(__name__).warning(
                    "removing stale lock %s (process %d is gone)", lock, pid
                )
                lock.unlink(missing_ok=True)
                continue
            raise StoreError(f"corpus is locked by another process ({lock})") from None
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        return lock


@contextmanager
def corpus_lock(corpus_path: str | Path):
    """One pipeline invocation at a time per corpus: O_EXCL lock file."""
    lock = acquire_corpus_lock(corpus_path)
    try:
        yield lock
    finally:
        lock.unlink(missing_ok=True)
