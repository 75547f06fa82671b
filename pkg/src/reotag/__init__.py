"""reotag: word-level language labelling for Māori–English bilingual corpora.

Builds labelled corpora from raw debate transcripts: ingestion and
tokenization, dictionary- and rule-based labelling, iterative context
resolution of ambiguous words, human-in-the-loop annotation of the
residue, and corpus analytics.
"""

__version__ = "0.1.0"

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    SentenceClass,
    StageDelta,
    Token,
    TokenKind,
    classify_sentence,
    code_switch_points,
)
from reotag.lexicon import Lexicon, LexiconSet, check_orthography, load_lexicon

__all__ = [
    "Corpus",
    "LabelledSentence",
    "LanguageLabel",
    "Lexicon",
    "LexiconSet",
    "SentenceClass",
    "StageDelta",
    "Token",
    "TokenKind",
    "check_orthography",
    "classify_sentence",
    "code_switch_points",
    "load_lexicon",
]
