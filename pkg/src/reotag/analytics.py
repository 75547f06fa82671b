"""Corpus reports: year-wise counts, frequency tables, n-grams, sentence
lengths, foreign-word candidates, and the stage-delta table.

All reports are pure reads over an immutable corpus and sort with explicit
tie-breaks, so output is deterministic byte for byte.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from reotag.corpus import Corpus, LanguageLabel, SentenceClass, StageDelta
from reotag.lexicon import default_stopwords

LABEL_ORDER = ("M", "P", "A", "U", "N", "S", "F")

FREQUENCY_FILTERS = ("all", "maori", "english", "content_only")


@dataclass(frozen=True)
class YearStats:
    """Sentence and word counts for one calendar year."""

    year: int
    total_sentences: int
    maori_only_sentences: int
    english_only_sentences: int
    bilingual_sentences: int
    total_words: int
    maori_words: int
    english_words: int


def year_stats(corpus: Corpus) -> list[YearStats]:
    """Group the corpus by the calendar year of each sentence's date.

    Indeterminate sentences count toward the totals but toward none of the
    three class subcategories.
    """
    per_year: dict[int, dict[str, int]] = {}
    for s in corpus.sentences:
        row = per_year.setdefault(
            s.date.year,
            {"total": 0, "maori": 0, "english": 0, "bilingual": 0, "words": 0, "m": 0, "p": 0},
        )
        row["total"] += 1
        cls = s.sentence_class
        if cls is SentenceClass.MAORI_ONLY:
            row["maori"] += 1
        elif cls is SentenceClass.ENGLISH_ONLY:
            row["english"] += 1
        elif cls is SentenceClass.BILINGUAL:
            row["bilingual"] += 1
        for t in s.tokens:
            if t.is_word:
                row["words"] += 1
                if t.label is LanguageLabel.MAORI:
                    row["m"] += 1
                elif t.label is LanguageLabel.ENGLISH:
                    row["p"] += 1
    return [
        YearStats(year, r["total"], r["maori"], r["english"], r["bilingual"], r["words"], r["m"], r["p"])
        for year, r in sorted(per_year.items())
    ]


@dataclass(frozen=True)
class FrequencyTable:
    filter: str
    rows: tuple[tuple[str, int], ...]


def _ranked(counter: Counter) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


def word_frequency(corpus: Corpus, filter: str = "all", stopwords: frozenset[str] | None = None) -> FrequencyTable:
    """Count lowercased word tokens under one of the four filters:
    all, maori (M only), english (P only), content_only (all minus the
    stopword lists)."""
    if filter not in FREQUENCY_FILTERS:
        raise ValueError(f"unknown frequency filter {filter!r}")
    if filter == "content_only" and stopwords is None:
        stopwords = default_stopwords()
    counter: Counter = Counter()
    for s in corpus.sentences:
        for t in s.tokens:
            if not t.is_word:
                continue
            if filter == "maori" and t.label is not LanguageLabel.MAORI:
                continue
            if filter == "english" and t.label is not LanguageLabel.ENGLISH:
                continue
            if filter == "content_only" and t.lower in stopwords:  # type: ignore[operator]
                continue
            counter[t.lower] += 1
    return FrequencyTable(filter, _ranked(counter))


def ngram_counts(
    corpus: Corpus,
    n: int,
    top_k: int | None = None,
    content_only: bool = False,
    stopwords: frozenset[str] | None = None,
    max_n: int = 3,
) -> tuple[tuple[tuple[str, ...], int], ...]:
    """Ranked n-gram counts over word tokens within sentences.

    content_only drops stopwords before windowing, so n-grams can span a
    removed stopword.  Ranked count descending, lexicographic tie-break;
    top_k truncates when given.
    """
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be in 1..{max_n}, got {n}")
    if content_only and stopwords is None:
        stopwords = default_stopwords()
    counter: Counter = Counter()
    for s in corpus.sentences:
        words = [t.lower for t in s.tokens if t.is_word]
        if content_only:
            words = [w for w in words if w not in stopwords]  # type: ignore[operator]
        for i in range(len(words) - n + 1):
            counter[tuple(words[i : i + n])] += 1
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(ranked[:top_k] if top_k is not None else ranked)


@dataclass(frozen=True)
class LengthStats:
    """Five-number summary of sentence character lengths for one class.

    Quartiles use the median-of-halves convention: halves exclude the
    middle element when the count is odd, and a missing half falls back to
    the median.  Outliers lie beyond 1.5 IQR from the quartiles.
    """

    count: int
    minimum: int
    q1: float
    median: float
    q3: float
    maximum: int
    outliers: tuple[int, ...]


def _median_sorted(xs: list[int]) -> float:
    n = len(xs)
    mid = n // 2
    return float(xs[mid]) if n % 2 else (xs[mid - 1] + xs[mid]) / 2.0


def length_summary(lengths: list[int]) -> LengthStats:
    xs = sorted(lengths)
    n = len(xs)
    median = _median_sorted(xs)
    lower, upper = xs[: n // 2], xs[(n + 1) // 2 :]
    q1 = _median_sorted(lower) if lower else median
    q3 = _median_sorted(upper) if upper else median
    iqr = q3 - q1
    fence_low, fence_high = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    outliers = tuple(x for x in xs if x < fence_low or x > fence_high)
    return LengthStats(n, xs[0], q1, median, q3, xs[-1], outliers)


def sentence_length_stats(corpus: Corpus) -> dict[SentenceClass, LengthStats]:
    """Character-length summaries per sentence class; length is the
    reconstructed sentence text (space-joined surfaces).  Classes with no
    sentences are absent."""
    lengths: dict[SentenceClass, list[int]] = {}
    for s in corpus.sentences:
        lengths.setdefault(s.sentence_class, []).append(len(s.text))
    return {cls: length_summary(xs) for cls, xs in sorted(lengths.items(), key=lambda kv: kv[0].value)}


def foreign_report(corpus: Corpus) -> list[tuple[str, int, str]]:
    """F-labelled words ranked by count, then U-labelled words as
    candidates for annotator triage."""
    foreign: Counter = Counter()
    unclear: Counter = Counter()
    for s in corpus.sentences:
        for t in s.tokens:
            if t.label is LanguageLabel.FOREIGN:
                foreign[t.lower] += 1
            elif t.label is LanguageLabel.UNCLEAR and t.is_word:
                unclear[t.lower] += 1
    rows = [(w, c, "F") for w, c in _ranked(foreign)]
    rows.extend((w, c, "U") for w, c in _ranked(unclear))
    return rows


def stage_report(corpus: Corpus) -> list[StageDelta]:
    """The pipeline stage history, one delta per stage, in order."""
    return list(corpus.provenance.stages)


def stage_table(deltas: list[StageDelta]) -> list[dict[str, object]]:
    """Stage history as flat rows; net_total is always zero because stages
    relabel tokens without adding or dropping any."""
    rows = []
    for d in deltas:
        row: dict[str, object] = {"stage": d.stage, "changed": d.changed}
        for code in LABEL_ORDER:
            row[f"{code}_before"] = d.before.get(code, 0)
            row[f"{code}_after"] = d.after.get(code, 0)
        row["total_before"] = d.total_before
        row["total_after"] = d.total_after
        row["net_total"] = d.total_after - d.total_before
        rows.append(row)
    return rows
