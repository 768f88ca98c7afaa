import math
import random

import numpy as np
import pytest

from radsum.errors import ValidationError
from radsum.metrics import (
    EmbeddingRecord,
    SynonymLexicon,
    bertscore_recall,
    bleu,
    meteor,
    rouge_l,
    rouge_lsum,
    rouge_n,
    score_corpus,
)
from radsum.tokenize import word_tokenize

VOCAB = (
    "no acute disease effusion pneumothorax stable heart lungs clear "
    "bilateral small left right lower lobe opacity unchanged consolidation"
).split()


def _random_pair(rng):
    ref = [rng.choice(VOCAB) for _ in range(rng.randint(3, 20))]
    cand = [rng.choice(VOCAB) for _ in range(rng.randint(3, 20))]
    return cand, ref


class TestRougeN:
    def test_identical(self):
        toks = "no acute disease".split()
        triple = rouge_n(toks, toks, 1)
        assert (triple.precision, triple.recall, triple.f1) == (1.0, 1.0, 1.0)

    def test_disjoint(self):
        triple = rouge_n("a b c".split(), "x y z".split(), 1)
        assert triple.f1 == 0.0

    def test_clipping(self):
        triple = rouge_n(["no", "no", "no"], ["no", "acute"], 1, stem=False)
        assert triple.precision == pytest.approx(1 / 3)
        assert triple.recall == pytest.approx(1 / 2)

    def test_stemming_bridges_inflections(self):
        with_stem = rouge_n(["effusions"], ["effusion"], 1, stem=True)
        without = rouge_n(["effusions"], ["effusion"], 1, stem=False)
        assert with_stem.f1 == 1.0 and without.f1 == 0.0

    def test_empty_candidate(self):
        triple = rouge_n([], ["no"], 1)
        assert triple == rouge_n(["no"], [], 1) == triple
        assert triple.f1 == 0.0

    def test_bigram_order_sensitivity(self):
        forward = rouge_n("a b c".split(), "a b c".split(), 2)
        reversed_ = rouge_n("c b a".split(), "a b c".split(), 2)
        assert forward.f1 == 1.0 and reversed_.f1 == 0.0

    def test_bounds_random(self):
        rng = random.Random(11)
        for _ in range(300):
            cand, ref = _random_pair(rng)
            for n in (1, 2):
                t = rouge_n(cand, ref, n)
                assert 0.0 <= t.precision <= 1.0
                assert 0.0 <= t.recall <= 1.0
                assert 0.0 <= t.f1 <= 1.0


class TestRougeL:
    def test_subsequence_not_substring(self):
        triple = rouge_l("a x b y c".split(), "a b c".split(), stem=False)
        assert triple.recall == 1.0
        assert triple.precision == pytest.approx(3 / 5)

    def test_symmetric_f1(self):
        rng = random.Random(13)
        for _ in range(100):
            cand, ref = _random_pair(rng)
            assert rouge_l(cand, ref).f1 == pytest.approx(rouge_l(ref, cand).f1)

    def test_rouge_l_le_rouge1_recall(self):
        rng = random.Random(17)
        for _ in range(200):
            cand, ref = _random_pair(rng)
            assert rouge_l(cand, ref).recall <= rouge_n(cand, ref, 1).recall + 1e-12


class TestRougeLsum:
    def test_single_sentence_equals_rouge_l(self):
        cand = "no acute disease"
        ref = "no chronic disease"
        lsum = rouge_lsum(cand, ref)
        ll = rouge_l(word_tokenize(cand), word_tokenize(ref))
        assert lsum.f1 == pytest.approx(ll.f1)

    def test_sentence_reordering_tolerated(self):
        ref = "Heart is normal . No effusion ."
        cand = "No effusion . Heart is normal ."
        assert rouge_lsum(cand, ref).f1 == pytest.approx(1.0)

    def test_empty(self):
        assert rouge_lsum("", "anything .").f1 == 0.0


class TestBleu:
    def test_perfect_match(self):
        pairs = [("no acute disease today".split(),) * 2]
        assert bleu(pairs) == pytest.approx(1.0)

    def test_brevity_penalty(self):
        cand = "no acute".split()
        ref = "no acute disease seen today again".split()
        score = bleu([(cand, ref)], max_n=1)
        assert score == pytest.approx(math.exp(1 - 6 / 2))

    def test_zero_without_smoothing(self):
        cand = "a b c d e".split()
        ref = "a x c y e".split()
        assert bleu([(cand, ref)]) == 0.0
        assert bleu([(cand, ref)], smoothing="add1") > 0.0

    def test_effective_order_short_candidate(self):
        # three tokens: no 4-grams exist, so order 4 is excluded, not zeroed
        pairs = [("no acute disease".split(),) * 2]
        assert bleu(pairs) == pytest.approx(1.0)

    def test_corpus_level_not_mean_of_sentences(self):
        p1 = ("a b c d".split(), "a b c d".split())
        p2 = ("w x y z".split(), "a b c d".split())
        corpus = bleu([p1, p2], smoothing="add1")
        mean = (bleu([p1], smoothing="add1") + bleu([p2], smoothing="add1")) / 2
        assert corpus != pytest.approx(mean)

    def test_empty_pairs_rejected(self):
        with pytest.raises(ValidationError):
            bleu([])

    def test_unknown_smoothing(self):
        with pytest.raises(ValidationError):
            bleu([(["a"], ["a"])], smoothing="exp")

    def test_bounds_random(self):
        rng = random.Random(19)
        pairs = [_random_pair(rng) for _ in range(30)]
        assert 0.0 <= bleu(pairs, smoothing="add1") <= 1.0


class TestMeteor:
    def test_identical(self):
        toks = "no acute disease".split()
        # one chunk over m matches leaves penalty 0.5 / m^3
        m = len(toks)
        assert meteor(toks, toks) == pytest.approx(1.0 - 0.5 / m**3)

    def test_no_match(self):
        assert meteor("a b".split(), "x y".split()) == 0.0

    def test_stem_stage(self):
        assert meteor(["effusions"], ["effusion"]) > 0.0

    def test_synonym_stage(self):
        lex = SynonymLexicon([["big", "large"]])
        assert meteor(["big"], ["large"], synonyms=lex) > 0.0
        assert meteor(["big"], ["large"]) == 0.0

    def test_fragmentation_penalty(self):
        ref = "a b c d".split()
        contiguous = meteor("a b c d".split(), ref)
        scrambled = meteor("d c b a".split(), ref)
        assert scrambled < contiguous

    def test_bounds_random(self):
        rng = random.Random(23)
        for _ in range(200):
            cand, ref = _random_pair(rng)
            assert 0.0 <= meteor(cand, ref) <= 1.0


class TestBertscoreRecall:
    def _record(self, ref, cand):
        return EmbeddingRecord(
            id="t",
            ref_tokens=tuple(f"r{i}" for i in range(len(ref))),
            ref_vectors=np.asarray(ref, dtype=float),
            cand_tokens=tuple(f"c{i}" for i in range(len(cand))),
            cand_vectors=np.asarray(cand, dtype=float),
        )

    def test_identical_rows(self):
        rows = [[1.0, 0.0], [0.0, 2.0]]
        assert bertscore_recall(self._record(rows, rows)) == pytest.approx(1.0)

    def test_scale_invariant(self):
        ref = [[1.0, 2.0], [3.0, -1.0]]
        cand = [[0.5, 0.5], [2.0, 1.0]]
        a = bertscore_recall(self._record(ref, cand))
        b = bertscore_recall(
            self._record([[5 * x for x in r] for r in ref], cand)
        )
        assert a == pytest.approx(b)

    def test_hand_value(self):
        ref = [[1.0, 0.0], [0.0, 1.0]]
        cand = [[1.0, 0.0]]
        assert bertscore_recall(self._record(ref, cand)) == pytest.approx(0.5)

    def test_zero_row_rejected(self):
        with pytest.raises(ValidationError):
            bertscore_recall(self._record([[0.0, 0.0]], [[1.0, 0.0]]))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            EmbeddingRecord(
                id="t",
                ref_tokens=("a", "b"),
                ref_vectors=np.ones((1, 3)),
                cand_tokens=("c",),
                cand_vectors=np.ones((1, 3)),
            )


class TestScoreCorpus:
    def test_id_mismatch(self):
        with pytest.raises(ValidationError):
            score_corpus({"a": "x"}, {"b": "x"})

    def test_per_record_bleu_absent(self):
        per_record, aggregate = score_corpus({"a": "no acute"}, {"a": "no acute"})
        assert per_record["a"].bleu is None
        assert aggregate.bleu is not None

    def test_insertion_order_irrelevant(self):
        preds = {"b": "stable heart", "a": "no acute disease"}
        refs = {"a": "no acute disease", "b": "enlarged heart"}
        fwd = score_corpus(preds, refs)[1]
        rev = score_corpus(
            dict(reversed(list(preds.items()))), dict(reversed(list(refs.items())))
        )[1]
        assert fwd == rev

    def test_matches_frozen_fixture(self, metric_fixture):
        preds = {p["id"]: p["prediction"] for p in metric_fixture["pairs"]}
        refs = {p["id"]: p["reference"] for p in metric_fixture["pairs"]}
        per_record, aggregate = score_corpus(
            preds,
            refs,
            stem=metric_fixture["config"]["stemming"],
            smoothing=metric_fixture["config"]["smoothing"],
        )
        expected = metric_fixture["expected"]
        assert aggregate.bleu == pytest.approx(expected["aggregate"]["bleu"], abs=1e-9)
        assert aggregate.meteor == pytest.approx(
            expected["aggregate"]["meteor"], abs=1e-9
        )
        for rid, exp in expected["per_record"].items():
            got = per_record[rid]
            assert got.meteor == pytest.approx(exp["meteor"], abs=1e-9), rid
            for name in ("rouge1", "rouge2", "rougeL", "rougeLsum"):
                triple = getattr(got, name)
                for part in ("precision", "recall", "f1"):
                    assert getattr(triple, part) == pytest.approx(
                        exp[name][part], abs=1e-9
                    ), (rid, name, part)
