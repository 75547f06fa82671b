"""Conditional context marking of ambiguous words.

A pass reads label context frozen at pass start (so processing order
cannot matter) and flips A words whose word-neighbourhood agrees: both
neighbours Māori, or both English.  At the sentence edges the two nearest
words on the open side must agree instead.  N/S tokens are transparent
when locating neighbours, switchable off for the strictly adjacent
reading.  The only transitions a pass can make are A->M and A->P.
"""

from __future__ import annotations

from reotag.corpus import (
    Corpus,
    LabelledSentence,
    LanguageLabel,
    StageDelta,
    Token,
    label_counts,
)

_CORE = (LanguageLabel.MAORI, LanguageLabel.ENGLISH)


def _word_indices(tokens: tuple[Token, ...], transparency: bool) -> list[int]:
    if transparency:
        return [i for i, t in enumerate(tokens) if t.is_word]
    return list(range(len(tokens)))


def resolved_label(
    tokens: tuple[Token, ...],
    index: int,
    *,
    final_rule: bool = True,
    transparency: bool = True,
) -> LanguageLabel:
    """New label for the A token at index, read from the given snapshot.

    Neighbour positions are the nearest word tokens (transparency on) or
    the strictly adjacent tokens (transparency off); None marks a missing
    position, i.e. the sentence edge.  Returns the existing label when the
    context does not decide.
    """
    positions = _word_indices(tokens, transparency)
    at = positions.index(index) if index in positions else None
    if at is None:
        return tokens[index].label

    def label_at(pos: int) -> LanguageLabel | None:
        if 0 <= pos < len(positions):
            return tokens[positions[pos]].label
        return None

    left, right = label_at(at - 1), label_at(at + 1)
    if left is not None and right is not None:
        if left is right and left in _CORE:
            return left
        return tokens[index].label
    if left is None and right is not None:
        after = label_at(at + 2)
        if right is after and right in _CORE:
            return right
        return tokens[index].label
    if final_rule and right is None and left is not None:
        before = label_at(at - 2)
        if left is before and left in _CORE:
            return left
    return tokens[index].label


def resolve_pass(
    sentence: LabelledSentence,
    *,
    final_rule: bool = True,
    transparency: bool = True,
    order: str = "ltr",
) -> LabelledSentence:
    """One conditional-marking pass over a sentence.

    Labels are read from the pass-start snapshot, so `order` ("ltr" or
    "rtl") cannot change the result; it exists so that order-independence
    is checkable from outside.  U and F tokens never change here.
    """
    snapshot = sentence.tokens
    indices = range(len(snapshot)) if order == "ltr" else range(len(snapshot) - 1, -1, -1)
    new_labels: dict[int, LanguageLabel] = {}
    for i in indices:
        token = snapshot[i]
        if token.is_word and token.label is LanguageLabel.AMBIGUOUS:
            new_labels[i] = resolved_label(
                snapshot, i, final_rule=final_rule, transparency=transparency
            )
    if not new_labels:
        return sentence
    return sentence.with_tokens(
        t.with_label(new_labels[i]) if i in new_labels else t for i, t in enumerate(snapshot)
    )


def _run_pass(
    corpus_sentences: tuple[LabelledSentence, ...],
    stage: str,
    *,
    final_rule: bool,
    transparency: bool,
) -> tuple[tuple[LabelledSentence, ...], StageDelta]:
    before = label_counts(corpus_sentences)
    changed = 0
    out = []
    for sentence in corpus_sentences:
        resolved = resolve_pass(sentence, final_rule=final_rule, transparency=transparency)
        changed += sum(
            1 for old, new in zip(sentence.tokens, resolved.tokens) if old.label is not new.label
        )
        out.append(resolved)
    sentences = tuple(out)
    return sentences, StageDelta(stage, before, label_counts(sentences), changed)


def resolve_corpus(
    corpus: Corpus,
    passes: int = 2,
    *,
    final_rule: bool = True,
    transparency: bool = True,
    stage_prefix: str = "resolve",
) -> tuple[Corpus, StageDelta]:
    """Apply the conditional-marking pass a fixed number of times.

    Each pass appends its own delta to the stage history; the returned
    delta aggregates all passes.  Raises for passes < 1.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    sentences = corpus.sentences
    before = label_counts(sentences)
    deltas = []
    for n in range(1, passes + 1):
        sentences, delta = _run_pass(
            sentences, f"{stage_prefix}-pass-{n}", final_rule=final_rule, transparency=transparency
        )
        deltas.append(delta)
    overall = StageDelta(
        f"{stage_prefix}(passes={passes})",
        before,
        label_counts(sentences),
        sum(d.changed for d in deltas),
    )
    return Corpus(sentences, corpus.provenance.with_stages(deltas)), overall


def resolve_to_fixpoint(
    corpus: Corpus,
    max_passes: int = 100,
    *,
    final_rule: bool = True,
    transparency: bool = True,
    stage_prefix: str = "resolve",
) -> tuple[Corpus, list[StageDelta]]:
    """Repeat the pass until nothing changes or max_passes is reached.

    Terminates in at most initial-A-count + 1 passes, since every pass
    either relabels an A token or is the last.
    """
    if max_passes < 1:
        raise ValueError("max_passes must be >= 1")
    sentences = corpus.sentences
    deltas: list[StageDelta] = []
    for n in range(1, max_passes + 1):
        sentences, delta = _run_pass(
            sentences, f"{stage_prefix}-pass-{n}", final_rule=final_rule, transparency=transparency
        )
        deltas.append(delta)
        if delta.changed == 0:
            break
    return Corpus(sentences, corpus.provenance.with_stages(deltas)), deltas
