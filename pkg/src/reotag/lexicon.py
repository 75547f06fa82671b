"""Word lists with macron-variant matching and Māori orthography checks.

A Māori entry written with macrons is findable under all four historical
spellings: the macron form itself, the double-vowel form (ā -> aa), the
umlaut form (ā -> ä) and the bare form (ā -> a).  The Māori, English and
ambiguous lists are kept pairwise disjoint: a spelling claimed by both
core lists is moved to the ambiguous list, which is exactly the job that
list exists for.
"""

from __future__ import annotations

import logging
import os
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path

log = logging.getLogger(__name__)

LEXICON_KINDS = ("maori", "english", "ambiguous", "stopword", "foreign")

MACRON_VOWELS = "āēīōū"
_DOUBLE = str.maketrans({"ā": "aa", "ē": "ee", "ī": "ii", "ō": "oo", "ū": "uu"})
_UMLAUT = str.maketrans("āēīōū", "äëïöü")
_BARE = str.maketrans("āēīōū", "aeiou")

ILLEGAL_MAORI_CHARS = frozenset("bcdfjlqsvxyz")

# Orthographically legal Māori characters, after the digraphs ng and wh are
# rewritten to single consonant symbols.
_NG = "ŋ"  # ŋ
_WH = "ƒ"  # placeholder for the wh digraph
MAORI_VOWELS = frozenset("aeiou" + MACRON_VOWELS)
MAORI_CONSONANTS = frozenset("hkmnprtw" + _NG + _WH)


class LexiconError(ValueError):
    """A word-list file could not be loaded or updated."""


def normalize_word(word: str) -> str:
    return unicodedata.normalize("NFC", word).casefold()


def macron_variants(word: str) -> tuple[str, ...]:
    """All indexed spellings of a word: itself plus, when it carries
    macrons, the double-vowel, umlaut and bare-vowel forms."""
    if not any(c in MACRON_VOWELS for c in word):
        return (word,)
    return (word, word.translate(_DOUBLE), word.translate(_UMLAUT), word.translate(_BARE))


def has_macron(word: str) -> bool:
    """True iff the word contains ā ē ī ō ū in any Unicode composition."""
    return any(c in MACRON_VOWELS for c in normalize_word(word))


def has_illegal_maori_chars(word: str) -> bool:
    """True iff the word contains a letter Māori orthography never uses."""
    return any(c in ILLEGAL_MAORI_CHARS for c in normalize_word(word))


def _rewrite_digraphs(word: str) -> str:
    # Left-to-right scan; ng and wh each become one consonant symbol.
    out = []
    i = 0
    while i < len(word):
        pair = word[i : i + 2]
        if pair == "ng":
            out.append(_NG)
            i += 2
        elif pair == "wh":
            out.append(_WH)
            i += 2
        else:
            out.append(word[i])
            i += 1
    return "".join(out)


@dataclass(frozen=True)
class OrthographyReport:
    """Outcome of the three phonotactic checks on one word."""

    word: str
    legal_chars: bool
    no_clusters: bool
    open_syllables: bool

    @property
    def valid(self) -> bool:
        return self.legal_chars and self.no_clusters and self.open_syllables


def check_orthography(word: str) -> OrthographyReport:
    """Check a word against Māori phonotactics.

    After rewriting the ng/wh digraphs to single consonant symbols, the
    word must use only Māori letters, contain no adjacent consonants, and
    end in a vowel — i.e. parse as a sequence of (C)V syllables.
    Apostrophes count as illegal characters.  Raises on an empty word.
    """
    if not word:
        raise ValueError("empty word")
    w = _rewrite_digraphs(normalize_word(word))
    legal = all(c in MAORI_VOWELS or c in MAORI_CONSONANTS for c in w)
    no_clusters = not any(
        w[i] in MAORI_CONSONANTS and w[i + 1] in MAORI_CONSONANTS for i in range(len(w) - 1)
    )
    open_syllables = w[-1] not in MAORI_CONSONANTS
    return OrthographyReport(word, legal, no_clusters, open_syllables)


@dataclass(frozen=True)
class Lexicon:
    """An immutable named word set with a variant-spelling index.

    entries hold canonical lowercase NFC words; variant_index maps every
    alternate spelling back to its canonical entry.
    """

    name: str
    entries: frozenset[str] = frozenset()
    variant_index: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(self.entries))
        object.__setattr__(self, "variant_index", dict(self.variant_index))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return self.contains(word)

    def contains(self, word: str) -> bool:
        w = normalize_word(word)
        return w in self.entries or w in self.variant_index

    @property
    def all_spellings(self) -> frozenset[str]:
        return self.entries | frozenset(self.variant_index)

    def _index_for(self, words: set[str], with_variants: bool) -> dict[str, str]:
        index = {}
        if with_variants:
            for entry in words:
                for variant in macron_variants(entry):
                    if variant not in words:
                        index[variant] = entry
        return index

    def add(self, word: str, with_variants: bool = False) -> "Lexicon":
        """Return a lexicon that also contains word (and its variants)."""
        w = normalize_word(word)
        if not w or not all(c.isalpha() or c == "'" for c in w):
            raise LexiconError(f"not a lexicon word: {word!r}")
        if self.contains(w):
            return self
        entries = set(self.entries) | {w}
        index = dict(self.variant_index)
        if with_variants:
            for variant in macron_variants(w):
                if variant != w and variant not in entries:
                    index[variant] = w
        return replace(self, entries=frozenset(entries), variant_index=index)

    def discard(self, spelling: str) -> "Lexicon":
        """Return a lexicon without the given spelling (entry or variant)."""
        w = normalize_word(spelling)
        entries = set(self.entries)
        index = dict(self.variant_index)
        if w in entries:
            entries.discard(w)
            index = {v: c for v, c in index.items() if c != w}
        index.pop(w, None)
        return replace(self, entries=frozenset(entries), variant_index=index)


def load_lexicon(path: str | Path, kind: str) -> Lexicon:
    """Load a one-word-per-line UTF-8 word list.

    Lines starting with # are comments; duplicates collapse; entries are
    lowercased and NFC-normalized.  For kind="maori" the macron-variant
    index is built.  Raises LexiconError with a line number on undecodable
    bytes, and on an unreadable file.
    """
    if kind not in LEXICON_KINDS:
        raise LexiconError(f"unknown lexicon kind {kind!r}")
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise LexiconError(f"cannot read {path}: {exc}") from exc
    entries: set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LexiconError(f"{path}:{lineno}: not valid UTF-8 ({exc})") from exc
        text = text.strip()
        if not text or text.startswith("#"):
            continue
        entries.add(normalize_word(text))
    lex = Lexicon(kind, frozenset(entries))
    if kind == "maori":
        index = {}
        for entry in entries:
            for variant in macron_variants(entry):
                if variant not in entries:
                    index[variant] = entry
        lex = replace(lex, variant_index=index)
    return lex


def _append_word(path: Path, word: str) -> None:
    # A single short append is atomic on POSIX; fsync makes it durable.
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(word + "\n")
        fh.flush()
        os.fsync(fh.fileno())


_CORE_KINDS = ("maori", "english")


@dataclass(frozen=True)
class LexiconSet:
    """The five word lists the pipeline consults, as one snapshot.

    Readers share snapshots freely; add_word returns a new snapshot and
    appends to the backing file when asked to persist.
    """

    maori: Lexicon
    english: Lexicon
    ambiguous: Lexicon
    stopwords: Lexicon = field(default_factory=lambda: Lexicon("stopword"))
    foreign: Lexicon = field(default_factory=lambda: Lexicon("foreign"))
    paths: dict[str, Path] = field(default_factory=dict)

    FILES = {
        "maori": "maori.txt",
        "english": "english.txt",
        "ambiguous": "ambiguous.txt",
        "foreign": "foreign.txt",
    }
    STOPWORD_FILES = ("stopwords_maori.txt", "stopwords_english.txt")

    @classmethod
    def from_dir(cls, directory: str | Path) -> "LexiconSet":
        """Load maori/english/ambiguous(.txt) plus optional stopword and
        foreign lists from a directory, then enforce core disjointness."""
        directory = Path(directory)
        loaded: dict[str, Lexicon] = {}
        paths: dict[str, Path] = {}
        for kind in ("maori", "english", "ambiguous"):
            path = directory / cls.FILES[kind]
            loaded[kind] = load_lexicon(path, kind)
            paths[kind] = path
        foreign_path = directory / cls.FILES["foreign"]
        if foreign_path.exists():
            loaded["foreign"] = load_lexicon(foreign_path, "foreign")
            paths["foreign"] = foreign_path
        else:
            loaded["foreign"] = Lexicon("foreign")
        stop_entries: set[str] = set()
        for name in cls.STOPWORD_FILES:
            path = directory / name
            if path.exists():
                stop_entries |= set(load_lexicon(path, "stopword").entries)
        if not stop_entries:
            stop_entries = set(default_stopwords())
        lexset = cls(
            maori=loaded["maori"],
            english=loaded["english"],
            ambiguous=loaded["ambiguous"],
            stopwords=Lexicon("stopword", frozenset(stop_entries)),
            foreign=loaded["foreign"],
            paths=paths,
        )
        return lexset._resolve_collisions()

    def _resolve_collisions(self) -> "LexiconSet":
        """Move any spelling claimed by both core lists to the ambiguous
        list, and let the ambiguous list trump both core lists."""
        maori, english, ambiguous = self.maori, self.english, self.ambiguous
        for w in sorted(maori.all_spellings & english.entries):
            log.warning("'%s' is in both the Māori and English lists; moved to ambiguous", w)
            maori = maori.discard(w)
            english = english.discard(w)
            ambiguous = ambiguous.add(w)
        for w in sorted(ambiguous.entries & (maori.all_spellings | english.entries)):
            log.warning("'%s' is also in a core list; the ambiguous list wins", w)
            maori = maori.discard(w)
            english = english.discard(w)
        return replace(self, maori=maori, english=english, ambiguous=ambiguous)

    def get(self, kind: str) -> Lexicon:
        if kind == "stopword":
            return self.stopwords
        if kind not in LEXICON_KINDS:
            raise LexiconError(f"unknown lexicon kind {kind!r}")
        return getattr(self, kind)

    def add_word(self, kind: str, word: str, persist: bool = False) -> "LexiconSet":
        """Add a word to one list; idempotent for words already present.

        Adding to one core list a word the other core list already knows is
        refused: that spelling is ambiguous and belongs on the ambiguous
        list instead.  With persist=True the word is appended to the list's
        backing file before the new snapshot is returned.
        """
        w = normalize_word(word)
        lex = self.get(kind)
        if lex.contains(w):
            return self
        if kind in _CORE_KINDS:
            other = self.english if kind == "maori" else self.maori
            if other.contains(w):
                raise LexiconError(
                    f"conflict: move to ambiguous list instead ({w!r} is already in the {other.name} list)"
                )
        updated = lex.add(w, with_variants=(kind == "maori"))
        if persist:
            path = self.paths.get(kind)
            if path is None:
                raise LexiconError(f"no backing file known for the {kind} list")
            _append_word(path, w)
        if kind == "stopword":
            return replace(self, stopwords=updated)
        return replace(self, **{kind: updated})

    def checksums(self) -> dict[str, str]:
        """SHA-256 of each backing file, for provenance reporting."""
        import hashlib

        sums = {}
        for kind, path in sorted(self.paths.items()):
            if path.exists():
                sums[kind] = hashlib.sha256(path.read_bytes()).hexdigest()
        return sums


def default_stopwords() -> frozenset[str]:
    """The stopword convention shipped with the package (both languages)."""
    from importlib.resources import files

    words: set[str] = set()
    data = files("reotag") / "data"
    for name in ("stopwords_english.txt", "stopwords_maori.txt"):
        text = (data / name).read_text(encoding="utf-8")
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(normalize_word(line))
    return frozenset(words)
