"""Lexical and embedding-based summarisation metrics.

All lexical metrics lowercase their inputs before matching. BLEU is reported
in [0, 1]; its smoothing, when enabled, adds one to numerator and denominator
of every order above unigram. METEOR uses the original parameterisation:
Fmean = 10PR / (R + 9P), penalty = 0.5 * (chunks / matches)^3, with a greedy
left-to-right one-to-one alignment in exact, stem, and synonym stages.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .porter import porter_stem
from .tokenize import TokenSequence, sentence_split, word_tokenize


@dataclass(frozen=True)
class RougeTriple:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_pr(precision: float, recall: float) -> "RougeTriple":
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
        return RougeTriple(precision=precision, recall=recall, f1=f1)


@dataclass(frozen=True)
class ScoreBundle:
    rouge1: RougeTriple
    rouge2: RougeTriple
    rougeL: RougeTriple
    rougeLsum: RougeTriple
    meteor: float
    bleu: float | None = None
    bertscore_recall: float | None = None


@dataclass(frozen=True)
class EmbeddingRecord:
    id: str
    ref_tokens: tuple[str, ...]
    ref_vectors: np.ndarray
    cand_tokens: tuple[str, ...]
    cand_vectors: np.ndarray

    def __post_init__(self):
        ref = np.asarray(self.ref_vectors, dtype=float)
        cand = np.asarray(self.cand_vectors, dtype=float)
        object.__setattr__(self, "ref_vectors", ref)
        object.__setattr__(self, "cand_vectors", cand)
        if ref.ndim != 2 or cand.ndim != 2:
            raise ValidationError(f"{self.id}: embedding matrices must be 2-D")
        if ref.shape[0] != len(self.ref_tokens) or cand.shape[0] != len(self.cand_tokens):
            raise ValidationError(f"{self.id}: row counts must match token counts")
        if ref.shape[0] and cand.shape[0] and ref.shape[1] != cand.shape[1]:
            raise ValidationError(f"{self.id}: embedding widths differ")
        if not (np.isfinite(ref).all() and np.isfinite(cand).all()):
            raise ValidationError(f"{self.id}: embeddings contain non-finite values")


def _tokens(seq) -> list[str]:
    if isinstance(seq, TokenSequence):
        return list(seq.tokens)
    return list(seq)


def _prepare(seq, stem: bool) -> list[str]:
    tokens = [t.lower() for t in _tokens(seq)]
    if stem:
        tokens = [porter_stem(t) for t in tokens]
    return tokens


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(cand, ref, n: int, stem: bool = True) -> RougeTriple:
    """Clipped n-gram overlap precision/recall/F1."""
    if n < 1:
        raise ValidationError("n-gram order must be >= 1")
    cand_counts = _ngram_counts(_prepare(cand, stem), n)
    ref_counts = _ngram_counts(_prepare(ref, stem), n)
    overlap = sum((cand_counts & ref_counts).values())
    cand_total = sum(cand_counts.values())
    ref_total = sum(ref_counts.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return RougeTriple.from_pr(precision, recall)


def _lcs_table(a: list[str], b: list[str]) -> list[list[int]]:
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table


def _lcs_length(a: list[str], b: list[str]) -> int:
    return _lcs_table(a, b)[len(a)][len(b)]


def _lcs_indices(a: list[str], b: list[str]) -> set[int]:
    """Indices into `a` of one longest common subsequence with `b`."""
    table = _lcs_table(a, b)
    i, j = len(a), len(b)
    indices: set[int] = set()
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1] and table[i][j] == table[i - 1][j - 1] + 1:
            indices.add(i - 1)
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return indices


def rouge_l(cand, ref, stem: bool = True) -> RougeTriple:
    """Longest-common-subsequence precision/recall/F1."""
    cand_tokens = _prepare(cand, stem)
    ref_tokens = _prepare(ref, stem)
    if not cand_tokens or not ref_tokens:
        return RougeTriple(0.0, 0.0, 0.0)
    lcs = _lcs_length(cand_tokens, ref_tokens)
    return RougeTriple.from_pr(lcs / len(cand_tokens), lcs / len(ref_tokens))


def rouge_lsum(cand_text: str, ref_text: str, stem: bool = True) -> RougeTriple:
    """Summary-level ROUGE-L: union-LCS per reference sentence with clipping."""
    cand_sents = [_prepare(word_tokenize(s), stem) for s in sentence_split(cand_text)]
    ref_sents = [_prepare(word_tokenize(s), stem) for s in sentence_split(ref_text)]
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if cand_total == 0 or ref_total == 0:
        return RougeTriple(0.0, 0.0, 0.0)
    ref_budget = Counter(t for s in ref_sents for t in s)
    cand_budget = Counter(t for s in cand_sents for t in s)
    hits = 0
    for ref_sent in ref_sents:
        union: set[int] = set()
        for cand_sent in cand_sents:
            union |= _lcs_indices(ref_sent, cand_sent)
        for idx in union:
            token = ref_sent[idx]
            if ref_budget[token] > 0 and cand_budget[token] > 0:
                hits += 1
                ref_budget[token] -= 1
                cand_budget[token] -= 1
    return RougeTriple.from_pr(hits / cand_total, hits / ref_total)


def bleu(pairs, max_n: int = 4, smoothing: str = "none") -> float:
    """Corpus-level BLEU with clipping, brevity penalty, and effective order.

    Orders whose total candidate n-gram count is zero are excluded from the
    geometric mean. smoothing="add1" adds one to numerator and denominator
    for every order n >= 2.
    """
    if smoothing not in ("none", "add1"):
        raise ValidationError(f"unknown smoothing {smoothing!r}")
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("bleu requires at least one candidate/reference pair")
    matches = [0] * (max_n + 1)
    totals = [0] * (max_n + 1)
    cand_len = 0
    ref_len = 0
    for cand, ref in pairs:
        cand_tokens = _prepare(cand, stem=False)
        ref_tokens = _prepare(ref, stem=False)
        cand_len += len(cand_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, max_n + 1):
            cand_counts = _ngram_counts(cand_tokens, n)
            ref_counts = _ngram_counts(ref_tokens, n)
            matches[n] += sum((cand_counts & ref_counts).values())
            totals[n] += sum(cand_counts.values())
    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, max_n + 1):
        if totals[n] == 0:
            continue
        if smoothing == "add1" and n >= 2:
            p = (matches[n] + 1) / (totals[n] + 1)
        else:
            if matches[n] == 0:
                return 0.0
            p = matches[n] / totals[n]
        log_sum += math.log(p)
        orders += 1
    if orders == 0:
        return 0.0
    geomean = math.exp(log_sum / orders)
    bp = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
    return bp * geomean


class SynonymLexicon:
    """Symmetric word-to-synonym mapping for the METEOR synonym stage."""

    def __init__(self, groups):
        self._map: dict[str, set[str]] = {}
        for group in groups:
            words = [w.lower() for w in group]
            for w in words:
                self._map.setdefault(w, set()).update(x for x in words if x != w)

    def are_synonyms(self, a: str, b: str) -> bool:
        return b in self._map.get(a, ())


def _greedy_stage(cand, ref, cand_free, ref_free, same) -> list[tuple[int, int]]:
    pairs = []
    for i in range(len(cand)):
        if not cand_free[i]:
            continue
        for j in range(len(ref)):
            if ref_free[j] and same(cand[i], ref[j]):
                cand_free[i] = False
                ref_free[j] = False
                pairs.append((i, j))
                break
    return pairs


def meteor(cand, ref, synonyms: SynonymLexicon | None = None) -> float:
    cand_tokens = [t.lower() for t in _tokens(cand)]
    ref_tokens = [t.lower() for t in _tokens(ref)]
    if not cand_tokens or not ref_tokens:
        return 0.0
    cand_free = [True] * len(cand_tokens)
    ref_free = [True] * len(ref_tokens)
    matches: list[tuple[int, int]] = []
    matches += _greedy_stage(
        cand_tokens, ref_tokens, cand_free, ref_free, lambda a, b: a == b
    )
    cand_stems = [porter_stem(t) for t in cand_tokens]
    ref_stems = [porter_stem(t) for t in ref_tokens]
    matches += _greedy_stage(
        cand_stems, ref_stems, cand_free, ref_free, lambda a, b: a == b
    )
    if synonyms is not None:
        matches += _greedy_stage(
            cand_tokens,
            ref_tokens,
            cand_free,
            ref_free,
            synonyms.are_synonyms,
        )
    m = len(matches)
    if m == 0:
        return 0.0
    precision = m / len(cand_tokens)
    recall = m / len(ref_tokens)
    fmean = 10 * precision * recall / (recall + 9 * precision)
    matches.sort()
    chunks = 1
    for (ci, ri), (cj, rj) in zip(matches, matches[1:]):
        if cj != ci + 1 or rj != ri + 1:
            chunks += 1
    penalty = 0.5 * (chunks / m) ** 3
    return fmean * (1.0 - penalty)


def bertscore_recall(rec: EmbeddingRecord) -> float:
    """Mean over reference rows of the max cosine similarity to candidate rows."""
    ref = rec.ref_vectors
    cand = rec.cand_vectors
    if ref.shape[0] == 0 or cand.shape[0] == 0:
        raise ValidationError(f"{rec.id}: embedding matrices must be non-empty")
    ref_norms = np.linalg.norm(ref, axis=1)
    cand_norms = np.linalg.norm(cand, axis=1)
    if (ref_norms == 0).any() or (cand_norms == 0).any():
        raise ValidationError(f"{rec.id}: zero-norm embedding row")
    sims = (ref / ref_norms[:, None]) @ (cand / cand_norms[:, None]).T
    return float(sims.max(axis=1).mean())


def score_corpus(
    predictions: dict[str, str],
    references: dict[str, str],
    embeddings: dict[str, EmbeddingRecord] | None = None,
    stem: bool = True,
    smoothing: str = "none",
) -> tuple[dict[str, ScoreBundle], ScoreBundle]:
    """Score each prediction against its reference and aggregate.

    ROUGE/METEOR/BERTScore aggregate as unweighted means over records; BLEU
    is computed once at corpus level. Records are processed in sorted-id
    order so the output is deterministic.
    """
    missing = sorted(set(references) - set(predictions))
    extra = sorted(set(predictions) - set(references))
    if missing or extra:
        raise ValidationError(
            f"prediction/reference id mismatch: missing={missing}, extra={extra}"
        )
    per_record: dict[str, ScoreBundle] = {}
    pairs = []
    for rid in sorted(references):
        cand_text = predictions[rid]
        ref_text = references[rid]
        cand_tokens = word_tokenize(cand_text)
        ref_tokens = word_tokenize(ref_text)
        pairs.append((cand_tokens, ref_tokens))
        bert = None
        if embeddings is not None:
            if rid not in embeddings:
                raise ValidationError(f"no embeddings for record {rid!r}")
            bert = bertscore_recall(embeddings[rid])
        per_record[rid] = ScoreBundle(
            rouge1=rouge_n(cand_tokens, ref_tokens, 1, stem=stem),
            rouge2=rouge_n(cand_tokens, ref_tokens, 2, stem=stem),
            rougeL=rouge_l(cand_tokens, ref_tokens, stem=stem),
            rougeLsum=rouge_lsum(cand_text, ref_text, stem=stem),
            meteor=meteor(cand_tokens, ref_tokens),
            bertscore_recall=bert,
        )
    def mean_triple(getter) -> RougeTriple:
        return RougeTriple(
            precision=_mean(getter(b).precision for b in per_record.values()),
            recall=_mean(getter(b).recall for b in per_record.values()),
            f1=_mean(getter(b).f1 for b in per_record.values()),
        )

    aggregate = ScoreBundle(
        rouge1=mean_triple(lambda b: b.rouge1),
        rouge2=mean_triple(lambda b: b.rouge2),
        rougeL=mean_triple(lambda b: b.rougeL),
        rougeLsum=mean_triple(lambda b: b.rougeLsum),
        meteor=_mean(b.meteor for b in per_record.values()),
        bleu=bleu(pairs, smoothing=smoothing),
        bertscore_recall=(
            _mean(b.bertscore_recall for b in per_record.values())
            if embeddings is not None
            else None
        ),
    )
    return per_record, aggregate


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0
