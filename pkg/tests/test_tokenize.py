import random
import string

import pytest

from radsum.tokenize import TokenSequence, sentence_split, word_tokenize


class TestWordTokenize:
    def test_trailing_period_peeled(self):
        assert list(word_tokenize("No acute disease.")) == ["No", "acute", "disease", "."]

    def test_empty(self):
        assert list(word_tokenize("")) == []

    def test_hyphens_kept_punctuation_peeled(self):
        assert list(word_tokenize("x-ray, 2-view")) == ["x-ray", ",", "2-view"]

    def test_leading_punctuation(self):
        assert list(word_tokenize('("stable")')) == ["(", '"', "stable", '"', ")"]

    def test_all_punctuation_chunk(self):
        assert list(word_tokenize("...")) == [".", ".", "."]

    def test_no_whitespace_in_tokens(self):
        for token in word_tokenize("a\tb\nc  d"):
            assert not any(ch.isspace() for ch in token)

    def test_fixed_point_random(self):
        rng = random.Random(7)
        alphabet = string.ascii_letters + string.digits + ".,;:!?()[]{}\"'/- \t"
        for _ in range(500):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            tokens = list(word_tokenize(text))
            assert list(word_tokenize(" ".join(tokens))) == tokens

    def test_lowercased_casing_tag(self):
        seq = word_tokenize("No Acute").lowercased()
        assert seq.casing == "lowercased"
        assert list(seq) == ["no", "acute"]


class TestSentenceSplit:
    def test_two_sentences(self):
        assert sentence_split("No effusion. Heart normal.") == [
            "No effusion.",
            "Heart normal.",
        ]

    def test_no_terminator(self):
        assert sentence_split("one sentence only") == ["one sentence only"]

    def test_abbreviation_does_not_split(self):
        assert sentence_split("Dr. Smith agrees. Done.") == [
            "Dr. Smith agrees.",
            "Done.",
        ]

    def test_exclamation_and_question(self):
        assert sentence_split("Really? Yes! Fine.") == ["Really?", "Yes!", "Fine."]

    def test_reconstruction(self):
        text = "First part.  Second   part. Third"
        sentences = sentence_split(text)
        assert " ".join(" ".join(s.split()) for s in sentences) == " ".join(text.split())

    def test_empty(self):
        assert sentence_split("") == []
        assert sentence_split("   ") == []

    def test_all_sentences_non_empty(self):
        for text in ("a. b. c.", "..", "x!?  y."):
            assert all(s for s in sentence_split(text))
