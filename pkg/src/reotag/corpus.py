"""Core domain types: tokens, labelled sentences, corpora, and their interchange formats.

The canonical on-disk form is a CoNLL-style TSV (UTF-8, NFC): one comment
line per sentence carrying its metadata, one ``surface<TAB>label`` line per
token, a blank line closing the sentence.  A JSON-lines form (one sentence
object per line) is provided for the service layer.
"""

from __future__ import annotations

import datetime as dt
import enum
import json
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, TextIO


class CorpusFormatError(ValueError):
    """A corpus file could not be parsed; carries file and line context."""

    def __init__(self, message: str, source: str = "", line: int = 0):
        self.source = source
        self.line = line
        prefix = f"{source}:{line}: " if source or line else ""
        super().__init__(prefix + message)


class LanguageLabel(str, enum.Enum):
    """Word-level language labels.

    M and P mark Māori and English (pākehā) words, A ambiguous spellings
    shared by both languages, U words no rule could place, N numbers and
    S punctuation.  F marks words of other languages; it is assigned only
    by a human decision or foreign-list lookup, never by the rule pass.
    """

    MAORI = "M"
    ENGLISH = "P"
    AMBIGUOUS = "A"
    UNCLEAR = "U"
    NUMBER = "N"
    SYMBOL = "S"
    FOREIGN = "F"


WORD_LABELS = frozenset(
    {
        LanguageLabel.MAORI,
        LanguageLabel.ENGLISH,
        LanguageLabel.AMBIGUOUS,
        LanguageLabel.UNCLEAR,
        LanguageLabel.FOREIGN,
    }
)


class TokenKind(enum.Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCTUATION = "punctuation"


class SentenceClass(enum.Enum):
    """Sentence-level language class derived from word-token labels."""

    MAORI_ONLY = "M"
    ENGLISH_ONLY = "P"
    BILINGUAL = "B"
    INDETERMINATE = "I"


@dataclass(frozen=True)
class Token:
    """One surface token.  Immutable; relabelling produces a new Token.

    kind and label are coupled: NUMBER<->N, PUNCTUATION<->S, and WORD
    tokens carry one of M/P/A/U/F.
    """

    surface: str
    kind: TokenKind
    label: LanguageLabel

    def __post_init__(self):
        surface = unicodedata.normalize("NFC", self.surface)
        if not surface or any(c.isspace() for c in surface):
            raise ValueError(f"token surface must be non-empty and whitespace-free: {self.surface!r}")
        object.__setattr__(self, "surface", surface)
        if self.kind is TokenKind.NUMBER and self.label is not LanguageLabel.NUMBER:
            raise ValueError("number tokens must be labelled N")
        if self.kind is TokenKind.PUNCTUATION and self.label is not LanguageLabel.SYMBOL:
            raise ValueError("punctuation tokens must be labelled S")
        if self.kind is TokenKind.WORD and self.label not in WORD_LABELS:
            raise ValueError(f"word tokens cannot be labelled {self.label.value}")

    @property
    def lower(self) -> str:
        """Case-folded NFC lookup key."""
        return self.surface.casefold()

    @property
    def is_word(self) -> bool:
        return self.kind is TokenKind.WORD

    def with_label(self, label: LanguageLabel) -> "Token":
        return replace(self, label=label)


def word_token(surface: str, label: LanguageLabel = LanguageLabel.UNCLEAR) -> Token:
    return Token(surface, TokenKind.WORD, label)


def number_token(surface: str) -> Token:
    return Token(surface, TokenKind.NUMBER, LanguageLabel.NUMBER)


def punctuation_token(surface: str) -> Token:
    return Token(surface, TokenKind.PUNCTUATION, LanguageLabel.SYMBOL)


def token_from_label(surface: str, label: LanguageLabel) -> Token:
    """Build a token whose kind is implied by its label."""
    if label is LanguageLabel.NUMBER:
        return number_token(surface)
    if label is LanguageLabel.SYMBOL:
        return punctuation_token(surface)
    return word_token(surface, label)


def classify_sentence(tokens: Iterable[Token]) -> SentenceClass:
    """Derive the sentence class from word-token labels.

    Only WORD tokens count: all M -> MAORI_ONLY, all P -> ENGLISH_ONLY,
    a mix of M and P -> BILINGUAL.  Any A/U/F token, or no word tokens at
    all, gives INDETERMINATE.  Total function, no errors.
    """
    seen_m = seen_p = False
    any_word = False
    for t in tokens:
        if not t.is_word:
            continue
        any_word = True
        if t.label is LanguageLabel.MAORI:
            seen_m = True
        elif t.label is LanguageLabel.ENGLISH:
            seen_p = True
        else:
            return SentenceClass.INDETERMINATE
    if not any_word:
        return SentenceClass.INDETERMINATE
    if seen_m and seen_p:
        return SentenceClass.BILINGUAL
    return SentenceClass.MAORI_ONLY if seen_m else SentenceClass.ENGLISH_ONLY


@dataclass(frozen=True)
class LabelledSentence:
    """An ordered token sequence with source metadata.

    (date, doc_id, seq) identifies the sentence within a corpus; seq is the
    sentence number within the source document.
    """

    date: dt.date
    doc_id: str
    seq: int
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if self.seq < 0:
            raise ValueError("seq must be >= 0")
        if any(c.isspace() for c in self.doc_id):
            raise ValueError("doc_id must not contain whitespace")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @property
    def sentence_class(self) -> SentenceClass:
        return classify_sentence(self.tokens)

    @property
    def text(self) -> str:
        """Sentence text reconstructed as space-joined token surfaces.

        Token spacing is not stored in the interchange format, so this is
        the reconstruction every report uses.
        """
        return " ".join(t.surface for t in self.tokens)

    def word_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]

    def with_tokens(self, tokens: Iterable[Token]) -> "LabelledSentence":
        return replace(self, tokens=tuple(tokens))


def code_switch_points(sentence: LabelledSentence) -> list[int]:
    """Indices where the language switches between adjacent word tokens.

    Returns every index i such that token i is a word and the next word
    token carries the other label of {M, P}; N/S tokens are transparent.
    Raises ValueError for an INDETERMINATE sentence, whose unresolved
    tokens make switch points meaningless.
    """
    if sentence.sentence_class is SentenceClass.INDETERMINATE:
        raise ValueError("unresolved tokens")
    switches = []
    prev_index = None
    for i, t in enumerate(sentence.tokens):
        if not t.is_word:
            continue
        if prev_index is not None and sentence.tokens[prev_index].label is not t.label:
            switches.append(prev_index)
        prev_index = i
    return switches


@dataclass(frozen=True)
class StageDelta:
    """Per-label token counts before and after one pipeline stage."""

    stage: str
    before: dict[str, int]
    after: dict[str, int]
    changed: int

    def __post_init__(self):
        object.__setattr__(self, "before", dict(self.before))
        object.__setattr__(self, "after", dict(self.after))

    @property
    def total_before(self) -> int:
        return sum(self.before.values())

    @property
    def total_after(self) -> int:
        return sum(self.after.values())

    def to_json(self) -> str:
        return json.dumps(
            {"stage": self.stage, "before": self.before, "after": self.after, "changed": self.changed},
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, raw: str) -> "StageDelta":
        obj = json.loads(raw)
        return cls(obj["stage"], obj["before"], obj["after"], obj["changed"])


@dataclass(frozen=True)
class Provenance:
    """Source file list plus the pipeline stage history of a corpus."""

    sources: tuple[str, ...] = ()
    stages: tuple[StageDelta, ...] = ()

    def with_stage(self, delta: StageDelta) -> "Provenance":
        return Provenance(self.sources, self.stages + (delta,))

    def with_stages(self, deltas: Iterable[StageDelta]) -> "Provenance":
        return Provenance(self.sources, self.stages + tuple(deltas))


def label_counts(sentences: Iterable[LabelledSentence]) -> dict[str, int]:
    """Token counts per label code, all seven labels always present."""
    counts = {label.value: 0 for label in LanguageLabel}
    for s in sentences:
        for t in s.tokens:
            counts[t.label.value] += 1
    return counts


@dataclass(frozen=True)
class Corpus:
    """An ordered sentence collection with provenance.

    Post-tokenization stages relabel tokens but never add or drop them, so
    the total token count is invariant across the stage history.
    """

    sentences: tuple[LabelledSentence, ...]
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[LabelledSentence]:
        return iter(self.sentences)

    @property
    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def counts(self) -> dict[str, int]:
        return label_counts(self.sentences)

    def with_sentences(self, sentences: Iterable[LabelledSentence], delta: StageDelta | None = None) -> "Corpus":
        prov = self.provenance.with_stage(delta) if delta else self.provenance
        return Corpus(tuple(sentences), prov)

    def find(self, doc_id: str, seq: int) -> LabelledSentence | None:
        for s in self.sentences:
            if s.doc_id == doc_id and s.seq == seq:
                return s
        return None


def final_corpus(corpus: Corpus) -> Corpus:
    """The gold-standard view: sentences still containing A, U or F words
    (or without word tokens at all) are dropped; N/S tokens remain."""
    kept = tuple(s for s in corpus.sentences if s.sentence_class is not SentenceClass.INDETERMINATE)
    return Corpus(kept, corpus.provenance)


# --- TSV interchange -------------------------------------------------------

_CLASS_CODES = {c.value: c for c in SentenceClass}


def _sentence_header(s: LabelledSentence) -> str:
    return f"# date={s.date.isoformat()} doc={s.doc_id} seq={s.seq} class={s.sentence_class.value}"


def write_tsv(corpus: Corpus, out: TextIO) -> None:
    """Write the canonical TSV form; provenance rides in header comments."""
    for src in corpus.provenance.sources:
        out.write(f"# corpus-source={src}\n")
    for delta in corpus.provenance.stages:
        out.write(f"# corpus-stage={delta.to_json()}\n")
    for s in corpus.sentences:
        out.write(_sentence_header(s) + "\n")
        for t in s.tokens:
            out.write(f"{t.surface}\t{t.label.value}\n")
        out.write("\n")


def save_tsv(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_tsv(corpus, fh)


def _parse_sentence_header(line: str, source: str, lineno: int) -> tuple[dt.date, str, int]:
    fields = {}
    for part in line[1:].split():
        if "=" not in part:
            raise CorpusFormatError(f"malformed sentence header field {part!r}", source, lineno)
        key, _, value = part.partition("=")
        fields[key] = value
    try:
        date = dt.date.fromisoformat(fields["date"])
        doc = fields["doc"]
        seq = int(fields["seq"])
    except (KeyError, ValueError) as exc:
        raise CorpusFormatError(f"bad sentence header ({exc})", source, lineno) from exc
    if fields.get("class") not in _CLASS_CODES:
        raise CorpusFormatError(f"unknown sentence class {fields.get('class')!r}", source, lineno)
    return date, doc, seq


def read_tsv(text_or_fh: str | TextIO, source: str = "<tsv>") -> Corpus:
    """Parse the TSV interchange form back into a Corpus.

    The stored class code is recomputed, not trusted; a mismatch means the
    file was edited inconsistently and raises CorpusFormatError.
    """
    text = text_or_fh if isinstance(text_or_fh, str) else text_or_fh.read()
    sources: list[str] = []
    stages: list[StageDelta] = []
    sentences: list[LabelledSentence] = []
    seen_keys: set[tuple[dt.date, str, int]] = set()

    header: tuple[dt.date, str, int] | None = None
    header_line = 0
    declared_class = ""
    tokens: list[Token] = []

    def close_sentence():
        nonlocal header, tokens
        if header is None:
            return
        date, doc, seq = header
        if (date, doc, seq) in seen_keys:
            raise CorpusFormatError(f"duplicate sentence key date={date} doc={doc} seq={seq}", source, header_line)
        seen_keys.add((date, doc, seq))
        sentence = LabelledSentence(date, doc, seq, tuple(tokens))
        if sentence.sentence_class.value != declared_class:
            raise CorpusFormatError(
                f"declared class {declared_class} disagrees with token labels "
                f"({sentence.sentence_class.value})",
                source,
                header_line,
            )
        sentences.append(sentence)
        header = None
        tokens = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("# corpus-source="):
            sources.append(line.split("=", 1)[1])
            continue
        if line.startswith("# corpus-stage="):
            try:
                stages.append(StageDelta.from_json(line.split("=", 1)[1]))
            except (json.JSONDecodeError, KeyError) as exc:
                raise CorpusFormatError(f"bad stage record ({exc})", source, lineno) from exc
            continue
        if line.startswith("#"):
            close_sentence()
            header = _parse_sentence_header(line, source, lineno)
            header_line = lineno
            declared_class = line.rsplit("class=", 1)[1].split()[0]
            continue
        if not line.strip():
            close_sentence()
            continue
        if header is None:
            raise CorpusFormatError("token line outside a sentence", source, lineno)
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusFormatError(f"expected 'surface<TAB>label', got {line!r}", source, lineno)
        surface, code = parts
        try:
            label = LanguageLabel(code)
            tokens.append(token_from_label(surface, label))
        except ValueError as exc:
            raise CorpusFormatError(str(exc), source, lineno) from exc
    close_sentence()
    return Corpus(tuple(sentences), Provenance(tuple(sources), tuple(stages)))


def load_tsv(path: str | Path) -> Corpus:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"not valid UTF-8: {exc}", str(path)) from exc
    return read_tsv(text, source=str(path))


# --- JSON-lines export (service layer) -------------------------------------


def sentence_to_dict(s: LabelledSentence) -> dict:
    return {
        "date": s.date.isoformat(),
        "doc": s.doc_id,
        "seq": s.seq,
        "class": s.sentence_class.value,
        "tokens": [{"surface": t.surface, "label": t.label.value} for t in s.tokens],
    }


def sentence_from_dict(obj: dict) -> LabelledSentence:
    tokens = tuple(token_from_label(t["surface"], LanguageLabel(t["label"])) for t in obj["tokens"])
    return LabelledSentence(dt.date.fromisoformat(obj["date"]), obj["doc"], int(obj["seq"]), tokens)


def write_jsonl(corpus: Corpus, out: TextIO) -> None:
    """One sentence object per line; provenance is not carried."""
    for s in corpus.sentences:
        out.write(json.dumps(sentence_to_dict(s), ensure_ascii=False, sort_keys=True) + "\n")


def read_jsonl(text_or_fh: str | TextIO, source: str = "<jsonl>") -> Corpus:
    text = text_or_fh if isinstance(text_or_fh, str) else text_or_fh.read()
    sentences = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            sentences.append(sentence_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise CorpusFormatError(f"bad sentence record ({exc})", source, lineno) from exc
    return Corpus(tuple(sentences))
