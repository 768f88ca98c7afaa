"""Corpus analysis, summarisation metrics, and training-history phase
detection for radiology report summarisation studies."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    KdeCurve,
    LengthStats,
    ReportRecord,
    clean_corpus,
    kde,
    length_stats,
    load_corpus,
    negation_prevalence,
    silverman_bandwidth,
)
from .diagnosis import NegationLexicon, classify, confusion, dummy_baseline, normalize  # noqa: F401
from .history import (  # noqa: F401
    MetricSeries,
    PhaseReport,
    RunMeta,
    best_score,
    classify_run,
    detect_early_peak,
    detect_plateau,
    detect_recovery,
    detect_trough,
    jaggedness,
    load_history,
    peak_table,
    predict_onset,
    smooth,
)
from .metrics import (  # noqa: F401
    EmbeddingRecord,
    RougeTriple,
    ScoreBundle,
    SynonymLexicon,
    bertscore_recall,
    bleu,
    meteor,
    rouge_l,
    rouge_lsum,
    rouge_n,
    score_corpus,
)
from .outlier import (  # noqa: F401
    FilterResult,
    GaussianModel2D,
    filter_percentile,
    fit_gaussian,
    mahalanobis_sq,
    truncation_length,
)
from .porter import porter_stem  # noqa: F401
from .tokenize import TokenSequence, sentence_split, word_tokenize  # noqa: F401
