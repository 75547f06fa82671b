"""Rule-pass tests.

The equivalence oracle here is deliberately naive: it re-reads the raw
word-list files, expands macron variants with its own table, re-checks
phonotactics with a recursive (C)V parser, and walks the if-chain in rule
order.  It shares no code with the production labeller beyond the corpus
types.
"""

import random
import unicodedata
from functools import lru_cache

from reotag.corpus import LanguageLabel, TokenKind
from reotag.labeler import label_corpus, label_sentence, label_token
from reotag.lexicon import LexiconSet

from conftest import FIXTURES, corpus_of, sentence, tok


class TestRuleExamples:
    def test_numbers_and_punctuation_first(self, lexicons):
        assert label_token(tok("42", "N"), lexicons) is LanguageLabel.NUMBER
        assert label_token(tok(";", "S"), lexicons) is LanguageLabel.SYMBOL

    def test_ambiguous_list_words(self, lexicons):
        for word in ("kia", "rite", "home", "hope", "kite"):
            assert label_token(tok(word, "U"), lexicons) is LanguageLabel.AMBIGUOUS, word

    def test_maori_dictionary_word(self, lexicons):
        assert label_token(tok("miraka", "U"), lexicons) is LanguageLabel.MAORI

    def test_macron_spelling_variants_all_maori(self, lexicons):
        for spelling in ("māori", "maaori", "maori", "mäori"):
            assert label_token(tok(spelling, "U"), lexicons) is LanguageLabel.MAORI, spelling

    def test_macron_alone_implies_maori(self, lexicons):
        assert not lexicons.maori.contains("āporo")
        assert label_token(tok("āporo", "U"), lexicons) is LanguageLabel.MAORI

    def test_foreign_word_with_illegal_chars_is_english(self, lexicons):
        assert label_token(tok("bonjour", "U"), lexicons) is LanguageLabel.ENGLISH

    def test_pluralised_maori_word_is_english(self, lexicons):
        assert label_token(tok("iwis", "U"), lexicons) is LanguageLabel.ENGLISH

    def test_failed_phonotactics_is_english(self, lexicons):
        assert label_token(tok("ramp", "U"), lexicons) is LanguageLabel.ENGLISH

    def test_dialectal_apostrophe_spelling_stays_unclear(self, lexicons):
        # the phonotactic P-route is skipped for apostrophe words
        assert label_token(tok("w'akarongo", "U"), lexicons) is LanguageLabel.UNCLEAR

    def test_unknown_cv_word_is_unclear(self, lexicons):
        assert label_token(tok("manuia", "U"), lexicons) is LanguageLabel.UNCLEAR

    def test_case_folded_lookup(self, lexicons):
        assert label_token(tok("Kia", "U"), lexicons) is LanguageLabel.AMBIGUOUS
        assert label_token(tok("WHARE", "U"), lexicons) is LanguageLabel.MAORI

    def test_ambiguous_precedes_both_dictionary_routes(self, tmp_path):
        # a word on every list stays A: rule 3 fires before 4 and 5
        for name, words in (
            ("maori.txt", ["rite"]),
            ("english.txt", ["rite"]),
            ("ambiguous.txt", ["rite"]),
        ):
            (tmp_path / name).write_text("\n".join(words) + "\n", encoding="utf-8")
        lexicons = LexiconSet.from_dir(tmp_path)
        assert label_token(tok("rite", "U"), lexicons) is LanguageLabel.AMBIGUOUS


class TestSentenceAndCorpus:
    def test_kia_ora_trace(self, lexicons):
        # hand-trace: kia on the ambiguous list, ora in the Māori list
        s = label_sentence(sentence([("Kia", "U"), ("ora", "U"), (".", "S")]), lexicons)
        assert [t.label.value for t in s.tokens] == ["A", "M", "S"]

    def test_empty_sentence(self, lexicons):
        s = label_sentence(sentence([]), lexicons)
        assert s.sentence_class.value == "I"
        assert s.tokens == ()

    def test_corpus_stage_history_appended(self, lexicons):
        corpus = corpus_of(sentence([("Kia", "U"), ("ora", "U")]))
        labelled = label_corpus(corpus, lexicons)
        assert [d.stage for d in labelled.provenance.stages] == ["label"]
        delta = labelled.provenance.stages[0]
        assert delta.before["U"] == 2
        assert delta.changed == 2
        assert delta.total_before == delta.total_after == 2

    def test_no_sentinel_left_after_labelling(self, lexicons):
        # every word token is decided by the rules; U afterwards means the
        # rules chose U, not that a token was skipped
        corpus = corpus_of(
            sentence([("whare", "U"), ("ramp", "U"), ("manuia", "U"), ("42", "N")])
        )
        labelled = label_corpus(corpus, lexicons)
        labels = [t.label.value for t in labelled.sentences[0].tokens]
        assert labels == ["M", "P", "U", "N"]


# --- naive oracle ------------------------------------------------------------

_ILLEGAL = set("bcdfjlqsvxyz")
_MACRONS = set("āēīōū")
_VOWELS = set("aeiouāēīōū")
_CONSONANTS = set("hkmnprtwŋƒ")
_VARIANT_TABLES = [
    {"ā": "aa", "ē": "ee", "ī": "ii", "ō": "oo", "ū": "uu"},
    {"ā": "ä", "ē": "ë", "ī": "ï", "ō": "ö", "ū": "ü"},
    {"ā": "a", "ē": "e", "ī": "i", "ō": "o", "ū": "u"},
]


def _naive_wordlist(path):
    spellings = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        word = unicodedata.normalize("NFC", line.strip()).casefold()
        if not word or word.startswith("#"):
            continue
        spellings.add(word)
        for table in _VARIANT_TABLES:
            spellings.add("".join(table.get(c, c) for c in word))
    return spellings


@lru_cache(maxsize=None)
def _parses_cv(s):
    if not s:
        return True
    if s[0] in _VOWELS and _parses_cv(s[1:]):
        return True
    return len(s) >= 2 and s[0] in _CONSONANTS and s[1] in _VOWELS and _parses_cv(s[2:])


def _naive_orthography_ok(word):
    rewritten = word.replace("ng", "ŋ").replace("wh", "ƒ")
    return bool(rewritten) and _parses_cv(rewritten)


def naive_label(token, maori, english, ambiguous):
    """Direct transcription of the labelling if-chain."""
    if token.kind is TokenKind.NUMBER:
        return LanguageLabel.NUMBER
    if token.kind is TokenKind.PUNCTUATION:
        return LanguageLabel.SYMBOL
    word = unicodedata.normalize("NFC", token.surface).casefold()
    if word in ambiguous:
        return LanguageLabel.AMBIGUOUS
    if word in maori or any(c in _MACRONS for c in word):
        return LanguageLabel.MAORI
    if word in english or any(c in _ILLEGAL for c in word):
        return LanguageLabel.ENGLISH
    if "'" not in word and not _naive_orthography_ok(word):
        return LanguageLabel.ENGLISH
    return LanguageLabel.UNCLEAR


def _random_tokens(rng, lexicons, n):
    pool_words = sorted(
        set(lexicons.maori.all_spellings)
        | set(lexicons.english.entries)
        | set(lexicons.ambiguous.entries)
    )
    alphabet = "aeiouāēīōūhkmnprtwbcdfgjlsvyz'"
    tokens = []
    for _ in range(n):
        kind = rng.random()
        if kind < 0.05:
            tokens.append(tok(str(rng.randint(0, 9999)), "N"))
        elif kind < 0.10:
            tokens.append(tok(rng.choice(".,!?;:"), "S"))
        elif kind < 0.55:
            tokens.append(tok(rng.choice(pool_words), "U"))
        else:
            length = rng.randint(1, 10)
            word = "".join(rng.choice(alphabet) for _ in range(length)).strip("'")
            tokens.append(tok(word or "a", "U"))
    return tokens


class TestOracleEquivalence:
    def test_zero_disagreements_on_10k_tokens(self, lexicons):
        maori = _naive_wordlist(FIXTURES / "lexicons" / "maori.txt")
        english = _naive_wordlist(FIXTURES / "lexicons" / "english.txt")
        ambiguous = _naive_wordlist(FIXTURES / "lexicons" / "ambiguous.txt")
        rng = random.Random(20100714)
        disagreements = []
        for token in _random_tokens(rng, lexicons, 10_000):
            mine = label_token(token, lexicons)
            ref = naive_label(token, maori, english, ambiguous)
            if mine is not ref:
                disagreements.append((token.surface, mine.value, ref.value))
        assert disagreements == []

    def test_determinism_across_runs(self, lexicons):
        rng = random.Random(7)
        tokens = _random_tokens(rng, lexicons, 500)
        first = [label_token(t, lexicons) for t in tokens]
        second = [label_token(t, lexicons) for t in tokens]
        assert first == second
