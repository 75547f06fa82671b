import datetime as dt
from pathlib import Path

import pytest

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    Token,
    TokenKind,
)
from reotag.lexicon import LexiconSet

FIXTURES = Path(__file__).parent / "fixtures"

D = dt.date(2010, 7, 14)


def tok(surface: str, code: str) -> Token:
    label = LanguageLabel(code)
    if label is LanguageLabel.NUMBER:
        return Token(surface, TokenKind.NUMBER, label)
    if label is LanguageLabel.SYMBOL:
        return Token(surface, TokenKind.PUNCTUATION, label)
    return Token(surface, TokenKind.WORD, label)


def sentence(pairs, date=D, doc="doc", seq=0) -> LabelledSentence:
    """Build a sentence from (surface, label-code) pairs."""
    return LabelledSentence(date, doc, seq, tuple(tok(s, c) for s, c in pairs))


def labels_only(codes, date=D, doc="doc", seq=0) -> LabelledSentence:
    """Build a sentence from bare label codes; surfaces are synthesized."""
    pairs = []
    for n, code in enumerate(codes):
        surface = {"N": "42", "S": "."}.get(code, f"w{n}")
        pairs.append((surface, code))
    return sentence(pairs, date, doc, seq)


def corpus_of(*sentences) -> Corpus:
    return Corpus(tuple(sentences))


@pytest.fixture(scope="session")
def lexicons() -> LexiconSet:
    return LexiconSet.from_dir(FIXTURES / "lexicons")
