import string

from hypothesis import given, settings
from hypothesis import strategies as st

from protoret.textnorm import (
    Pos,
    Token,
    analyze,
    default_lexicon,
    lemmatize,
    normalize_text,
    tag,
    tokenize,
)


class TestTokenize:
    def test_basic_sentence(self):
        assert tokenize("A dog leaps.") == ["a", "dog", "leaps", "."]

    def test_empty(self):
        assert tokenize("") == []

    def test_gold_sentence(self):
        assert tokenize("Canoe on a shore of lake.") == ["canoe", "on", "a", "shore", "of", "lake", "."]

    def test_punctuation_split_single_chars(self):
        assert tokenize("wait... what?!") == ["wait", ".", ".", ".", "what", "?", "!"]

    def test_apostrophe(self):
        assert tokenize("the dog's ball") == ["the", "dog", "'", "s", "ball"]

    def test_no_whitespace_in_tokens(self):
        for tok in tokenize("one\ttwo\n three,four"):
            assert " " not in tok and "\t" not in tok


class TestLemmatize:
    def test_irregular_participle(self):
        assert lemmatize("thrown") == "throw"

    def test_plural(self):
        assert lemmatize("canoes") == "canoe"

    def test_base_form_identity(self):
        assert lemmatize("dog") == "dog"

    def test_third_person(self):
        assert lemmatize("leaps") == "leap"
        assert lemmatize("sits") == "sit"
        assert lemmatize("catches") == "catch"

    def test_progressive_and_past(self):
        assert lemmatize("running") == "run"
        assert lemmatize("parked") == "park"
        assert lemmatize("sitting") == "sit"

    def test_exception_beats_rules(self):
        # "was" would survive the s-rules as "wa" without the exception table
        assert lemmatize("was") == "be"

    def test_never_empty(self):
        lex = default_lexicon()
        for w in ["s", "a", "ss", "ed", "ing"]:
            assert lemmatize(w, lex) != ""

    def test_idempotent_over_lexicon_closure(self):
        lex = default_lexicon()
        closure = set(lex.exceptions) | set(lex.exceptions.values()) | set(lex.pos_lexicon)
        closure |= {lemmatize(w, lex) for w in closure}
        for w in sorted(closure):
            once = lemmatize(w, lex)
            assert lemmatize(once, lex) == once, f"non-idempotent lemma for {w!r}: {once!r}"


class TestTag:
    def test_known_noun(self):
        assert tag(["dog"]) == [Token("dog", "dog", Pos.NOUN, 0)]

    def test_suffix_rule_plus_lexicon(self):
        assert tag(["leaps"]) == [Token("leaps", "leap", Pos.VERB, 0)]

    def test_empty(self):
        assert tag([]) == []

    def test_priority_noun_over_verb(self):
        # "park" carries both tags in the shipped lexicon
        lex = default_lexicon()
        assert {Pos.NOUN, Pos.VERB} <= set(lex.pos_lexicon["park"])
        assert tag(["park"], lex)[0].pos is Pos.NOUN

    def test_unknown_word_is_other(self):
        assert tag(["zorblax"])[0].pos is Pos.OTHER

    def test_internal_capitalization_marks_propn(self):
        toks = analyze("He met Zorblax .")
        assert toks[2].surface == "zorblax"
        assert toks[2].pos is Pos.PROPN

    def test_sentence_initial_capital_not_propn(self):
        toks = analyze("Zorblax met him .")
        assert toks[0].pos is Pos.OTHER

    def test_known_word_capitalized_keeps_lexicon_tag(self):
        toks = analyze("the big Dog .")
        assert toks[2].pos is Pos.NOUN

    def test_indices_strictly_increasing(self):
        toks = analyze("a man throws away his dog 's favorite frisbee .")
        assert [t.index for t in toks] == list(range(len(toks)))


@settings(max_examples=200)
@given(st.text(alphabet=string.ascii_letters + string.digits + " .,'!?-", max_size=80))
def test_roundtrip_tokenize(text):
    surfaces = tokenize(text)
    assert tokenize(" ".join(surfaces)) == surfaces


@settings(max_examples=100)
@given(st.text(max_size=80))
def test_tokenize_deterministic_and_space_free(text):
    once = tokenize(text)
    assert once == tokenize(text)
    assert all(not any(c.isspace() for c in tok) for tok in once)
    assert analyze(text) == analyze(text)


def test_normalize_text():
    assert normalize_text("A  Dog   leaps.") == "a dog leaps ."
