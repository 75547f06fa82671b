"""Turn raw source documents into clean, tokenized, unlabelled sentences.

HTML is stripped lexically (malformed nesting tolerated), text is split on
sentence-final punctuation with an abbreviation guard, tidied, and
tokenized.  Word tokens leave here carrying the U sentinel; numbers and
punctuation already carry their final N/S labels.
"""

from __future__ import annotations

import datetime as dt
import re
import unicodedata
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    Provenance,
    Token,
    number_token,
    punctuation_token,
    word_token,
)

DEFAULT_ABBREVIATIONS = ("Mr.", "Mrs.", "Dr.", "Hon.", "No.", "St.")

_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "br", "div", "dl", "dt", "dd",
    "fieldset", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section", "table",
    "td", "th", "tr", "ul",
}


class IngestError(ValueError):
    """A source document could not be ingested."""


class _TextExtractor(HTMLParser):
    """Lexical tag stripper: no validation, scripts and styles skipped."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in ("script", "style"):
            self._skip_depth += 1
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in ("script", "style") and self._skip_depth:
            self._skip_depth -= 1
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data):
        if not self._skip_depth:
            self.parts.append(data)


def extract_text(html: str) -> str:
    """Strip markup down to plain text.

    Tags, scripts and styles are removed, block boundaries become
    newlines, entity references are decoded, and the result is
    NFC-normalized with blank lines dropped.  Plain-text input passes
    through unchanged apart from that normalization.
    """
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    text = unicodedata.normalize("NFC", "".join(parser.parts))
    lines = [line.strip() for line in text.splitlines()]
    return "\n".join(line for line in lines if line)


def split_sentences(text: str, abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split tag-free text into sentences.

    A segment ends at . ? or ! followed by whitespace or end of text; a
    full stop closing a listed abbreviation does not split.  Segments are
    trimmed and empty ones dropped.
    """
    guard = set(abbreviations)
    sentences = []
    start = 0
    for i, ch in enumerate(text):
        if ch not in ".?!":
            continue
        nxt = text[i + 1] if i + 1 < len(text) else ""
        if nxt and not nxt.isspace():
            continue
        if ch == ".":
            j = i
            while j > 0 and not text[j - 1].isspace():
                j -= 1
            if text[j : i + 1] in guard:
                continue
        segment = text[start : i + 1].strip()
        if segment:
            sentences.append(segment)
        start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


_WS_RUN = re.compile(r"\s+")
_PUNCT_RUN = re.compile(r"([^\w\s])\1+")


def clean_sentence(s: str) -> str:
    """Tidy a sentence: collapse whitespace runs to one space, drop control
    characters, collapse runs of one repeated punctuation mark, trim.
    Output is NFC, so tokenization downstream is exactly lossless."""
    s = unicodedata.normalize("NFC", s)
    s = _WS_RUN.sub(" ", s)
    s = "".join(c for c in s if unicodedata.category(c) not in ("Cc", "Cf"))
    s = _PUNCT_RUN.sub(r"\1", s)
    return s.strip()


def _is_punct_char(c: str) -> bool:
    return not c.isalnum()


def _classify_piece(piece: str) -> Token:
    has_digit = any(c.isdigit() for c in piece)
    has_alpha = any(c.isalpha() for c in piece)
    if has_digit and not has_alpha:
        return number_token(piece)
    if not has_digit and not has_alpha:
        return punctuation_token(piece)
    return word_token(piece, LanguageLabel.UNCLEAR)


def _split_hyphens(core: str) -> list[Token]:
    tokens: list[Token] = []
    for i, piece in enumerate(core.split("-")):
        if i:
            tokens.append(punctuation_token("-"))
        if piece:
            tokens.append(_classify_piece(piece))
    return tokens


def _tokenize_chunk(chunk: str) -> list[Token]:
    lead, trail = [], []
    core = chunk
    while core and _is_punct_char(core[0]):
        lead.append(core[0])
        core = core[1:]
    while core and _is_punct_char(core[-1]):
        trail.append(core[-1])
        core = core[:-1]
    tokens = [punctuation_token(c) for c in lead]
    if core:
        tokens.extend(_split_hyphens(core))
    tokens.extend(punctuation_token(c) for c in reversed(trail))
    return tokens


def tokenize_chunks(s: str) -> list[list[Token]]:
    """Tokenize, preserving which tokens shared a whitespace-separated
    chunk.  Joining each chunk's surfaces and re-inserting single spaces
    between chunks reproduces the cleaned sentence exactly."""
    return [toks for part in s.split() for toks in [_tokenize_chunk(part)] if toks]


def tokenize(s: str) -> list[Token]:
    """Tokenize a cleaned sentence.

    Whitespace separates chunks; leading and trailing punctuation split
    off as S tokens; hyphenated compounds split into their components
    around S hyphens; apostrophes stay word-internal.  A piece with a
    digit and no letter is a number; pure punctuation is punctuation;
    everything else is a word carrying the U sentinel.
    """
    return [t for chunk in tokenize_chunks(s) for t in chunk]


@dataclass(frozen=True)
class SourceDocument:
    """One raw input document after markup stripping."""

    doc_id: str
    date: dt.date
    raw: str


_MONTHS = (
    "january", "february", "march", "april", "may", "june",
    "july", "august", "september", "october", "november", "december",
)
_ISO_DATE = re.compile(r"(?<!\d)(\d{4})-(\d{2})-(\d{2})(?!\d)")
_DAY_MONTH_YEAR = re.compile(
    r"\b(\d{1,2})\s+(" + "|".join(_MONTHS) + r")\s+(\d{4})\b", re.IGNORECASE
)


def _find_date(text: str) -> dt.date | None:
    for match in _ISO_DATE.finditer(text):
        try:
            return dt.date(int(match[1]), int(match[2]), int(match[3]))
        except ValueError:
            continue
    for match in _DAY_MONTH_YEAR.finditer(text):
        try:
            return dt.date(int(match[3]), _MONTHS.index(match[2].lower()) + 1, int(match[1]))
        except ValueError:
            continue
    return None


def extract_date(text: str, filename: str) -> dt.date:
    """Find the report date: a document header line first, then a
    YYYY-MM-DD or DD Month YYYY pattern in the filename, else an error."""
    header = "\n".join(text.splitlines()[:20])
    found = _find_date(header)
    if found is None:
        found = _find_date(filename)
    if found is None:
        raise IngestError(f"no report date found in header or filename of {filename!r}")
    return found


def load_document(path: str | Path) -> SourceDocument:
    path = Path(path)
    try:
        raw_text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() in (".html", ".htm"):
        text = extract_text(raw_text)
    else:
        text = extract_text(raw_text) if "<" in raw_text else unicodedata.normalize("NFC", raw_text)
    doc_id = re.sub(r"\s+", "_", path.stem)
    return SourceDocument(doc_id, extract_date(text, path.name), text)


def document_sentences(
    doc: SourceDocument, abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS
) -> list[LabelledSentence]:
    """Split, clean and tokenize one document into sequenced sentences."""
    sentences = []
    seq = 0
    for raw_sentence in split_sentences(doc.raw, abbreviations):
        tokens = tokenize(clean_sentence(raw_sentence))
        if not tokens:
            continue
        sentences.append(LabelledSentence(doc.date, doc.doc_id, seq, tuple(tokens)))
        seq += 1
    return sentences


def ingest_directory(
    directory: str | Path, abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS
) -> Corpus:
    """Ingest every .html/.htm/.txt file in a directory (sorted order)."""
    directory = Path(directory)
    paths = sorted(
        p for p in directory.iterdir() if p.suffix.lower() in (".html", ".htm", ".txt")
    )
    if not paths:
        raise IngestError(f"no .html or .txt files in {directory}")
    sentences: list[LabelledSentence] = []
    for path in paths:
        sentences.extend(document_sentences(load_document(path), abbreviations))
    return Corpus(tuple(sentences), Provenance(tuple(p.name for p in paths)))
