"""Rule-based word labelling.

Every token gets one of N, S, A, M, P, U from a fixed rule order:
numbers, punctuation, the ambiguous list, the Māori route (dictionary or
macrons), the English route (dictionary, illegal letters, or failed
phonotactics), and finally U for whatever is left.  The order matters: a
word on the ambiguous list stays A even when both dictionaries know it.
"""

from __future__ import annotations

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    StageDelta,
    Token,
    TokenKind,
    label_counts,
)
from reotag.lexicon import LexiconSet, check_orthography, has_illegal_maori_chars, has_macron


def label_token(token: Token, lexicons: LexiconSet) -> LanguageLabel:
    """Assign a label to one token; pure function of (token, lexicons).

    The phonotactic fallback of the English route is skipped for words
    with apostrophes: dialectal spellings like w'akarongo would otherwise
    be swept into P instead of surfacing as U for annotators.
    """
    if token.kind is TokenKind.NUMBER:
        return LanguageLabel.NUMBER
    if token.kind is TokenKind.PUNCTUATION:
        return LanguageLabel.SYMBOL
    word = token.lower
    if lexicons.ambiguous.contains(word):
        return LanguageLabel.AMBIGUOUS
    if lexicons.maori.contains(word) or has_macron(word):
        return LanguageLabel.MAORI
    if lexicons.english.contains(word) or has_illegal_maori_chars(word):
        return LanguageLabel.ENGLISH
    if "'" not in word and not check_orthography(word).valid:
        return LanguageLabel.ENGLISH
    return LanguageLabel.UNCLEAR


def label_sentence(sentence: LabelledSentence, lexicons: LexiconSet) -> LabelledSentence:
    return sentence.with_tokens(t.with_label(label_token(t, lexicons)) for t in sentence.tokens)


def label_corpus(corpus: Corpus, lexicons: LexiconSet, stage: str = "label") -> Corpus:
    """Label every token and append the stage delta to the history."""
    before = corpus.counts()
    changed = 0
    sentences = []
    for sentence in corpus.sentences:
        relabelled = label_sentence(sentence, lexicons)
        changed += sum(
            1 for old, new in zip(sentence.tokens, relabelled.tokens) if old.label is not new.label
        )
        sentences.append(relabelled)
    after = label_counts(sentences)
    return corpus.with_sentences(sentences, StageDelta(stage, before, after, changed))
