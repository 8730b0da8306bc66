"""Tests for the cleaning pipeline and tokenization."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from emoknn.errors import ParseError, ValidationError
from emoknn.preprocess import (
    GENERAL,
    GENERAL_STOPWORDS,
    RAW,
    CleaningConfig,
    EmojiTable,
    EmoticonTable,
    StopwordList,
    clean,
    default_emojis,
    default_emoticons,
    default_stopwords,
    load_emoticons,
    load_stopwords,
    tokenize,
)

EMOTICONS = EmoticonTable({":)": "smiley face", ":-(": "frowning face", ":(": "frowning face"})
EMOJIS = EmojiTable({"\U0001F602": "face with tears of joy"})
STOPWORDS = StopwordList(frozenset({"i", "the", "a", "is"}))


class TestCleaningConfig:
    def test_stopwords_require_general(self):
        with pytest.raises(ValidationError):
            CleaningConfig(general=False, remove_stopwords=True)

    def test_presets(self):
        assert not RAW.general
        assert GENERAL.general and not GENERAL.remove_stopwords
        assert GENERAL_STOPWORDS.remove_stopwords


class TestClean:
    def test_pipeline_fixture(self):
        # Hand-traced through the nine stages.
        text = "@user I'm happy!! #blessed\n:)"
        assert clean(text, GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == (
            "Im happy blessed smiley face"
        )

    def test_general_false_is_identity(self):
        text = "@user I'm happy!! #blessed\n:) 123"
        assert clean(text, RAW, EMOTICONS, EMOJIS, STOPWORDS) == text

    def test_only_a_tag_becomes_empty(self):
        assert clean("@only_a_tag", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == ""

    def test_emoji_replaced_with_description(self):
        out = clean("so funny \U0001F602 today", GENERAL, EMOTICONS, EMOJIS, STOPWORDS)
        assert out == "so funny face with tears of joy today"

    def test_ampersand_becomes_and(self):
        assert clean("you&me", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == "you and me"

    def test_hashtag_word_kept_symbol_deleted(self):
        assert clean("love #mondays", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == "love mondays"

    def test_digits_deleted(self):
        assert clean("room 101 now", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == "room now"

    def test_newlines_become_spaces(self):
        assert clean("one\ntwo\rthree", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == "one two three"

    def test_lowercase_flag(self):
        config = CleaningConfig(general=True, lowercase=True)
        assert clean("HELLO World", config, EMOTICONS, EMOJIS, STOPWORDS) == "hello world"

    def test_stopwords_removed_case_insensitive(self):
        out = clean("The cat is A cat", GENERAL_STOPWORDS, EMOTICONS, EMOJIS, STOPWORDS)
        assert out == "cat cat"

    def test_stopword_removal_with_empty_list(self):
        with pytest.raises(ValidationError):
            clean("hi", GENERAL_STOPWORDS, EMOTICONS, EMOJIS, StopwordList())

    def test_longest_emoticon_wins(self):
        # ":-(" must be matched before its suffix ":(" can.
        assert clean("sad :-(", GENERAL, EMOTICONS, EMOJIS, STOPWORDS) == "sad frowning face"


def _char_classes(text: str):
    import unicodedata

    return {unicodedata.category(c)[0] for c in text if not c.isspace()}


tweet_texts = st.text(
    alphabet=st.characters(codec="utf-8", exclude_characters="\x00"),
    max_size=120,
)


@settings(max_examples=200, deadline=None)
@given(tweet_texts)
def test_clean_is_idempotent(text):
    emoticons, emojis, stopwords = default_emoticons(), default_emojis(), default_stopwords()
    for config in (GENERAL, GENERAL_STOPWORDS, CleaningConfig(general=True, lowercase=True)):
        once = clean(text, config, emoticons, emojis, stopwords)
        twice = clean(once, config, emoticons, emojis, stopwords)
        assert once == twice


@settings(max_examples=200, deadline=None)
@given(tweet_texts)
def test_clean_output_contains_no_deleted_classes(text):
    out = clean(text, GENERAL, default_emoticons(), default_emojis(), default_stopwords())
    assert "#" not in out
    assert not any(c.isdigit() for c in out)
    assert not any(tok.startswith("@") for tok in out.split())
    # No punctuation, symbol, or number categories survive.
    assert not (_char_classes(out) & {"P", "S", "N"})


@settings(max_examples=100, deadline=None)
@given(tweet_texts)
def test_stopword_removal_never_adds_tokens(text):
    emoticons, emojis, stopwords = default_emoticons(), default_emojis(), default_stopwords()
    before = set(tokenize(clean(text, GENERAL, emoticons, emojis, stopwords)))
    after = set(tokenize(clean(text, GENERAL_STOPWORDS, emoticons, emojis, stopwords)))
    assert after <= before


class TestTokenize:
    def test_collapsed_whitespace(self):
        assert tokenize("a  b") == ["a", "b"]

    def test_empty(self):
        assert tokenize("") == []

    def test_cleaned_fixture_token_count(self):
        out = clean("@user I'm happy!! #blessed\n:)", GENERAL, EMOTICONS, EMOJIS, STOPWORDS)
        assert len(tokenize(out)) == 5


class TestTables:
    def test_load_emoticons(self, tmp_path):
        p = tmp_path / "emoticons.tsv"
        p.write_text(":)\tsmiley face\n:(\tfrowning face\n", encoding="utf-8")
        table = load_emoticons(p)
        assert len(table) == 2

    def test_pure_letter_emoticon_rejected(self):
        with pytest.raises(ValidationError, match="pure-letter"):
            EmoticonTable({"XD": "laughing"})

    def test_emoji_description_validated(self):
        with pytest.raises(ValidationError):
            EmojiTable({"\U0001F602": "tears-of-joy!"})

    def test_malformed_table_row(self, tmp_path):
        p = tmp_path / "emoticons.tsv"
        p.write_text(":)\tsmiley\textra\n", encoding="utf-8")
        with pytest.raises(ParseError, match=":1"):
            load_emoticons(p)

    def test_load_stopwords(self, tmp_path):
        p = tmp_path / "stop.txt"
        p.write_text("The\nand\n\nof\n", encoding="utf-8")
        words = load_stopwords(p)
        assert len(words) == 3
        assert "the" in words

    def test_default_tables_load(self):
        assert len(default_emoticons()) > 50
        assert len(default_emojis()) > 100
        assert len(default_stopwords()) > 100
