"""Cached measurement engine.

Feature extraction touches the same sentences across many folds and
conditions; the engine memoizes per-sentence profiles and per-pair distance
bundles. All loaded resources are immutable after construction, so one engine
can be shared by concurrent readers.
"""

from dataclasses import dataclass

from revjudge.textmetrics.base import TokenizedSentence, tokenize
from revjudge.textmetrics.checking import CheckerConfig, ErrorCounts, error_counts
from revjudge.textmetrics.counts import CountStats, count_stats
from revjudge.textmetrics.distances import (
    bleu,
    kl_divergence,
    levenshtein,
    union_count_vectors,
)
from revjudge.textmetrics.ngrams import ngram_multiset
from revjudge.textmetrics.specificity import specificity
from revjudge.textmetrics.syntax import SyntaxStats, syntax_stats


@dataclass(frozen=True)
class SentenceProfile:
    ts: TokenizedSentence
    counts: CountStats
    errors: ErrorCounts
    specificity: float
    syntax: SyntaxStats
    grams: dict


@dataclass(frozen=True)
class PairProfile:
    lev_char: int
    lev_token: int
    kl_s1_s2: float
    kl_s2_s1: float
    bleu: float


class MetricsEngine:
    def __init__(self, checker: CheckerConfig = None, spec_weights: dict = None,
                 syntax_provider=None, max_cache: int = 200000):
        self._checker = checker
        self._spec_weights = spec_weights
        self._syntax = syntax_provider
        self._max_cache = max_cache
        self._sentences = {}
        self._pairs = {}

    def sentence_profile(self, text: str) -> SentenceProfile:
        prof = self._sentences.get(text)
        if prof is not None:
            return prof
        ts = tokenize(text)
        prof = SentenceProfile(
            ts=ts,
            counts=count_stats(ts),
            errors=error_counts(ts, self._checker),
            specificity=specificity(ts, self._spec_weights).value,
            syntax=syntax_stats(ts, self._syntax),
            grams={n: ngram_multiset(ts, n) for n in (1, 2, 3)},
        )
        if len(self._sentences) < self._max_cache:
            self._sentences[text] = prof
        return prof

    def pair_profile(self, s1: str, s2: str) -> PairProfile:
        key = (s1, s2)
        prof = self._pairs.get(key)
        if prof is not None:
            return prof
        p1 = self.sentence_profile(s1)
        p2 = self.sentence_profile(s2)
        pvec, qvec = union_count_vectors(p1.ts, p2.ts)
        prof = PairProfile(
            lev_char=levenshtein(p1.ts, p2.ts, "char"),
            lev_token=levenshtein(p1.ts, p2.ts, "token"),
            kl_s1_s2=kl_divergence(pvec, qvec),
            kl_s2_s1=kl_divergence(qvec, pvec),
            bleu=bleu(p1.ts, p2.ts),
        )
        if len(self._pairs) < self._max_cache:
            self._pairs[key] = prof
        return prof
