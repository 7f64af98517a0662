"""Corpus statistics: joint counts, pairwise tree edit distance, timing."""

from .ted import tree_edit_distance, encode_postorder  # noqa: F401
from .stats import CorpusMetrics, corpus_stats, timing_harness  # noqa: F401
