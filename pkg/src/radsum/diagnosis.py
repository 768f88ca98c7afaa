"""Rule-based negated-diagnosis classification and its confusion-matrix recast.

The positive class is always the negated diagnosis ("no acute ..."). A text
counts as negated when its normalized form exactly matches a lexicon pattern
or matches the generic template "no <...> abnormality|disease|process|findings"
with the category keyword terminating the text, so a trailing positive-finding
clause defeats the match. Classification is a pure function of the normalized
text, which makes it invariant under normalization by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ValidationError

_PUNCT_RE = re.compile(r"[^\w\s]|_")
_TEMPLATE_RE = re.compile(r"no(?: \S+)* (?:abnormality|disease|process|findings)")

NEGATED = "negated"
DIAGNOSIS = "diagnosis"

_SEED_PATTERNS = (
    "no acute cardiopulmonary abnormality",
    "no active disease",
    "no acute radiographic cardiopulmonary process",
)


@dataclass(frozen=True)
class NegationLexicon:
    patterns: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "patterns", frozenset(self.patterns))
        for pattern in self.patterns:
            if pattern != normalize(pattern):
                raise ValidationError(f"lexicon pattern not normalized: {pattern!r}")
        missing = [p for p in _SEED_PATTERNS if p not in self.patterns]
        if missing:
            raise ValidationError(f"lexicon missing seed patterns: {missing}")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int
    positive_class: str = NEGATED

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0


def normalize(text: str) -> str:
    """Lowercase, replace punctuation with spaces, collapse whitespace."""
    lowered = _PUNCT_RE.sub(" ", text.lower())
    return " ".join(lowered.split())


def load_lexicon(path: str | Path | None = None) -> NegationLexicon:
    """Load patterns from a lexicon file ('#' comments); default is bundled."""
    if path is None:
        raw = resources.files("radsum.data").joinpath("negation_lexicon.txt").read_text()
    else:
        raw = Path(path).read_text()
    patterns = set()
    for line in raw.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            patterns.add(line)
    return NegationLexicon(frozenset(patterns))


def classify(text: str, lexicon: NegationLexicon) -> str:
    norm = normalize(text)
    if not norm:
        return DIAGNOSIS
    if norm in lexicon.patterns:
        return NEGATED
    if _TEMPLATE_RE.fullmatch(norm):
        return NEGATED
    return DIAGNOSIS


def confusion(
    pred_texts: dict[str, str],
    ref_texts: dict[str, str],
    lexicon: NegationLexicon,
) -> ConfusionCounts:
    missing = sorted(set(ref_texts) - set(pred_texts))
    extra = sorted(set(pred_texts) - set(ref_texts))
    if missing or extra:
        raise ValidationError(
            f"prediction/reference id mismatch: missing={missing}, extra={extra}"
        )
    tp = fp = fn = tn = 0
    for rid in ref_texts:
        pred_neg = classify(pred_texts[rid], lexicon) == NEGATED
        ref_neg = classify(ref_texts[rid], lexicon) == NEGATED
        if pred_neg and ref_neg:
            tp += 1
        elif pred_neg:
            fp += 1
        elif ref_neg:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def dummy_baseline(
    ref_texts: dict[str, str], lexicon: NegationLexicon
) -> tuple[float, float]:
    """Precision/recall of the always-negated classifier against these references."""
    if not ref_texts:
        raise ValidationError("dummy baseline needs at least one reference")
    negated = sum(
        1 for text in ref_texts.values() if classify(text, lexicon) == NEGATED
    )
    if negated == 0:
        return 0.0, 0.0
    return negated / len(ref_texts), 1.0
