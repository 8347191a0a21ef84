"""Per-sentence and pairwise text measurements used as features."""

from revjudge.textmetrics.base import (
    TOKENIZER_VERSION,
    TokenizedSentence,
    named_entity_flags,
    sentence_hash,
    tokenize,
)
from revjudge.textmetrics.checking import (
    CheckerConfig,
    ErrorCounts,
    error_counts,
    grammar_rule_hits,
)
from revjudge.textmetrics.counts import CountStats, count_stats
from revjudge.textmetrics.distances import (
    bleu,
    kl_divergence,
    levenshtein,
    union_count_vectors,
)
from revjudge.textmetrics.engine import MetricsEngine, PairProfile, SentenceProfile
from revjudge.textmetrics.ngrams import multiset_common, multiset_only, ngram_multiset
from revjudge.textmetrics.specificity import SpecificityScore, cue_values, specificity
from revjudge.textmetrics.syntax import (
    HeuristicSyntax,
    SidecarSyntax,
    SyntaxStats,
    syntax_stats,
)

__all__ = [
    "TOKENIZER_VERSION",
    "TokenizedSentence",
    "tokenize",
    "sentence_hash",
    "named_entity_flags",
    "ngram_multiset",
    "multiset_common",
    "multiset_only",
    "levenshtein",
    "kl_divergence",
    "union_count_vectors",
    "bleu",
    "CountStats",
    "count_stats",
    "CheckerConfig",
    "ErrorCounts",
    "error_counts",
    "grammar_rule_hits",
    "SpecificityScore",
    "specificity",
    "cue_values",
    "SyntaxStats",
    "syntax_stats",
    "HeuristicSyntax",
    "SidecarSyntax",
    "MetricsEngine",
    "SentenceProfile",
    "PairProfile",
]
