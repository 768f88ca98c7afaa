#!/usr/bin/env python3
"""Generate the 50-pair metric parity fixture.

Expected values come from oracle implementations written independently of
the shipped package: positional n-gram enumeration for ROUGE-N, recursive
memoized LCS for ROUGE-L, an index-set union LCS for summary-level ROUGE-L,
a log-domain loop for corpus BLEU, and a while-loop greedy aligner for
METEOR. Reference metric packages (sacrebleu, rouge-score, nltk) are not
reachable from this environment's package mirror, so these stand-ins are the
committed reference side of the dual route.

Texts are built so tokenization is unambiguous: tokens (including the
sentence-final period token) joined by single spaces, sentences ending with
a " ." token.

Usage: python3 scripts/gen_metric_fixtures.py > tests/fixtures/metric_fixture.json
"""

import json
import random
import sys
from functools import lru_cache
from math import exp, log
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from gen_porter_vectors import OraclePorter

_stemmer = OraclePorter()


def stem(word):
    return _stemmer.stem(word) if word.isalpha() else word


# ---------------------------------------------------------------------------
# Oracle metric implementations
# ---------------------------------------------------------------------------

def ngram_multiset(tokens, n):
    grams = {}
    for i in range(len(tokens) - n + 1):
        grams[tuple(tokens[i : i + n])] = grams.get(tuple(tokens[i : i + n]), 0) + 1
    return grams


def oracle_rouge_n(cand, ref, n):
    cg = ngram_multiset(cand, n)
    rg = ngram_multiset(ref, n)
    overlap = 0
    for gram, count in rg.items():
        overlap += min(count, cg.get(gram, 0))
    ct = sum(cg.values())
    rt = sum(rg.values())
    p = overlap / ct if ct else 0.0
    r = overlap / rt if rt else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return {"precision": p, "recall": r, "f1": f}


def oracle_lcs_len(a, b):
    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return rec(i - 1, j - 1) + 1
        return max(rec(i - 1, j), rec(i, j - 1))

    return rec(len(a), len(b))


def oracle_rouge_l(cand, ref):
    if not cand or not ref:
        return {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    lcs = oracle_lcs_len(tuple(cand), tuple(ref))
    p = lcs / len(cand)
    r = lcs / len(ref)
    f = 2 * p * r / (p + r) if p + r else 0.0
    return {"precision": p, "recall": r, "f1": f}


def oracle_lcs_ref_indices(ref, cand):
    """Indices into ref of one canonical LCS (same tie-break as a bottom-up
    backtrack preferring the ref-side move)."""
    n, m = len(ref), len(cand)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if ref[i - 1] == cand[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    out = set()
    i, j = n, m
    while i and j:
        if ref[i - 1] == cand[j - 1] and table[i][j] == table[i - 1][j - 1] + 1:
            out.add(i - 1)
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return out


def oracle_rouge_lsum(cand_sents, ref_sents):
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if not cand_total or not ref_total:
        return {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    ref_budget = {}
    for s in ref_sents:
        for t in s:
            ref_budget[t] = ref_budget.get(t, 0) + 1
    cand_budget = {}
    for s in cand_sents:
        for t in s:
            cand_budget[t] = cand_budget.get(t, 0) + 1
    hits = 0
    for rs in ref_sents:
        union = set()
        for cs in cand_sents:
            union |= oracle_lcs_ref_indices(rs, cs)
        for idx in union:
            t = rs[idx]
            if ref_budget.get(t, 0) > 0 and cand_budget.get(t, 0) > 0:
                hits += 1
                ref_budget[t] -= 1
                cand_budget[t] -= 1
    p = hits / cand_total
    r = hits / ref_total
    f = 2 * p * r / (p + r) if p + r else 0.0
    return {"precision": p, "recall": r, "f1": f}


def oracle_bleu(token_pairs, max_n=4):
    c_len = sum(len(c) for c, _ in token_pairs)
    r_len = sum(len(r) for _, r in token_pairs)
    if c_len == 0:
        return 0.0
    total_log = 0.0
    used = 0
    for n in range(1, max_n + 1):
        num = 0
        den = 0
        for cand, ref in token_pairs:
            cg = ngram_multiset(cand, n)
            rg = ngram_multiset(ref, n)
            den += sum(cg.values())
            for gram, count in cg.items():
                num += min(count, rg.get(gram, 0))
        if den == 0:
            continue
        if num == 0:
            return 0.0
        total_log += log(num / den)
        used += 1
    if used == 0:
        return 0.0
    bp = 1.0 if c_len >= r_len else exp(1.0 - r_len / c_len)
    return bp * exp(total_log / used)


def oracle_meteor(cand, ref):
    cand_left = list(range(len(cand)))
    ref_left = list(range(len(ref)))
    matches = []
    for keyfn in (lambda w: w, stem):
        taken_c = []
        for ci in cand_left:
            hit = None
            for rj in ref_left:
                if keyfn(cand[ci]) == keyfn(ref[rj]):
                    hit = rj
                    break
            if hit is not None:
                matches.append((ci, hit))
                ref_left.remove(hit)
                taken_c.append(ci)
        for ci in taken_c:
            cand_left.remove(ci)
    m = len(matches)
    if m == 0:
        return 0.0
    p = m / len(cand)
    r = m / len(ref)
    fmean = 10 * p * r / (r + 9 * p)
    matches.sort()
    chunks = 1
    for k in range(1, len(matches)):
        if (
            matches[k][0] != matches[k - 1][0] + 1
            or matches[k][1] != matches[k - 1][1] + 1
        ):
            chunks += 1
    return fmean * (1 - 0.5 * (chunks / m) ** 3)


# ---------------------------------------------------------------------------
# Fixture corpus construction
# ---------------------------------------------------------------------------

VOCAB = """
no acute cardiopulmonary abnormality disease process findings small left
right pleural effusion effusions heart size normal borderline enlarged lungs
lung clear stable unchanged chronic mild moderate severe bibasilar opacity
opacities atelectasis consolidation pneumonia infiltrate infiltrates edema
degenerative changes spine thoracic granuloma calcified nodule nodules mass
within limits mediastinal contour contours pulmonary vascularity bony
structures intact fracture fractures osteophytes costophrenic angles sharp
blunted low volumes hyperinflated copd emphysema interval improvement
worsening compared prior exam suspicious recommend followup ct correlate
clinically
""".split()


def make_sentence(rng, length):
    return [rng.choice(VOCAB) for _ in range(length)]


def perturb(rng, sent):
    out = list(sent)
    ops = rng.randint(0, 3)
    for _ in range(ops):
        op = rng.choice(["swap", "drop", "sub", "ins"])
        if op == "swap" and len(out) >= 2:
            i = rng.randrange(len(out) - 1)
            out[i], out[i + 1] = out[i + 1], out[i]
        elif op == "drop" and len(out) >= 2:
            out.pop(rng.randrange(len(out)))
        elif op == "sub":
            out[rng.randrange(len(out))] = rng.choice(VOCAB)
        else:
            out.insert(rng.randrange(len(out) + 1), rng.choice(VOCAB))
    return out


def main():
    rng = random.Random(20250823)
    pairs = []
    for idx in range(50):
        rid = f"fx{idx:03d}"
        n_ref_sents = rng.randint(1, 3)
        ref_sents = [make_sentence(rng, rng.randint(3, 9)) + ["."] for _ in range(n_ref_sents)]
        if idx < 8:
            # identical pairs keep high-order BLEU counts alive
            cand_sents = [list(s) for s in ref_sents]
        elif idx < 12:
            cand_sents = [list(s) for s in reversed(ref_sents)]
        else:
            cand_sents = [perturb(rng, s[:-1]) + ["."] for s in ref_sents]
            if rng.random() < 0.3 and len(cand_sents) > 1:
                cand_sents.pop()
        pairs.append(
            {
                "id": rid,
                "reference_sents": ref_sents,
                "candidate_sents": cand_sents,
            }
        )

    per_record = {}
    bleu_pairs = []
    for pair in pairs:
        ref_sents = [[stem(t) for t in s] for s in pair["reference_sents"]]
        cand_sents = [[stem(t) for t in s] for s in pair["candidate_sents"]]
        ref_flat = [t for s in ref_sents for t in s]
        cand_flat = [t for s in cand_sents for t in s]
        ref_raw = [t for s in pair["reference_sents"] for t in s]
        cand_raw = [t for s in pair["candidate_sents"] for t in s]
        bleu_pairs.append((cand_raw, ref_raw))
        per_record[pair["id"]] = {
            "rouge1": oracle_rouge_n(cand_flat, ref_flat, 1),
            "rouge2": oracle_rouge_n(cand_flat, ref_flat, 2),
            "rougeL": oracle_rouge_l(cand_flat, ref_flat),
            "rougeLsum": oracle_rouge_lsum(cand_sents, ref_sents),
            "meteor": oracle_meteor(cand_raw, ref_raw),
        }

    def agg(path):
        vals = []
        for rec in per_record.values():
            node = rec
            for key in path:
                node = node[key]
            vals.append(node)
        return sum(vals) / len(vals)

    aggregate = {}
    for name in ("rouge1", "rouge2", "rougeL", "rougeLsum"):
        aggregate[name] = {
            k: agg((name, k)) for k in ("precision", "recall", "f1")
        }
    aggregate["meteor"] = agg(("meteor",))
    aggregate["bleu"] = oracle_bleu(bleu_pairs)

    fixture = {
        "config": {"stemming": True, "smoothing": "none", "lowercase": True},
        "pairs": [
            {
                "id": p["id"],
                "reference": " ".join(t for s in p["reference_sents"] for t in s),
                "prediction": " ".join(t for s in p["candidate_sents"] for t in s),
            }
            for p in pairs
        ],
        "expected": {"per_record": per_record, "aggregate": aggregate},
    }
    json.dump(fixture, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
