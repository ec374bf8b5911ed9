"""Distributional diversity metrics for quatrain corpora."""

from ._core import (
    Corpus,
    PronouncingLexicon,
    ValidationError,
    avg_max_across,
    avg_max_within,
    builtin_embeddings,
    bws_score,
    canonical_schemes,
    corpus_from_records,
    dedup_overlaps,
    draw_samples,
    entropy,
    histogram_intersection,
    judge_pair,
    kl_divergence,
    length_stats,
    mattr,
    memorization_scan,
    mtld,
    parse_corpus,
    pearson,
    rank_metric,
    ratcliff_obershelp,
    scheme_label,
    similarity_upper_bound,
    split_train_dev,
    tokenize,
    ttr,
    __version__,
)

__all__ = [
    "Corpus",
    "PronouncingLexicon",
    "ValidationError",
    "avg_max_across",
    "avg_max_within",
    "builtin_embeddings",
    "bws_score",
    "canonical_schemes",
    "corpus_from_records",
    "dedup_overlaps",
    "draw_samples",
    "entropy",
    "histogram_intersection",
    "judge_pair",
    "kl_divergence",
    "length_stats",
    "mattr",
    "memorization_scan",
    "mtld",
    "parse_corpus",
    "pearson",
    "rank_metric",
    "ratcliff_obershelp",
    "scheme_label",
    "similarity_upper_bound",
    "split_train_dev",
    "tokenize",
    "ttr",
    "__version__",
]
