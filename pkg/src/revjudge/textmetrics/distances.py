"""Pairwise distance features: edit distance, KL divergence, sentence BLEU."""

import math
from collections import Counter

import numpy as np

from revjudge import kernels
from revjudge.textmetrics.base import TokenizedSentence, tokenize
from revjudge.textmetrics.ngrams import ngram_multiset

KL_EPSILON = 1e-6
BLEU_EPSILON = 1e-9


def _as_sentence(x) -> TokenizedSentence:
    return x if isinstance(x, TokenizedSentence) else tokenize(x)


def _codes_char(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)


def _codes_token(tokens_a, tokens_b):
    ids = {}
    for t in tokens_a:
        ids.setdefault(t, len(ids))
    for t in tokens_b:
        ids.setdefault(t, len(ids))
    a = np.array([ids[t] for t in tokens_a], dtype=np.int64)
    b = np.array([ids[t] for t in tokens_b], dtype=np.int64)
    return a, b


def levenshtein(a, b, granularity: str = "char") -> int:
    """Minimal insert/delete/substitute count. granularity "char" edits raw
    characters; "token" edits case-preserved tokens."""
    if granularity == "char":
        ra = a.raw if isinstance(a, TokenizedSentence) else a
        rb = b.raw if isinstance(b, TokenizedSentence) else b
        ca, cb = _codes_char(ra), _codes_char(rb)
    elif granularity == "token":
        ta, tb = _as_sentence(a).tokens, _as_sentence(b).tokens
        ca, cb = _codes_token(ta, tb)
    else:
        raise ValueError(f"granularity must be 'char' or 'token', got {granularity!r}")
    return int(kernels.lev_distance(ca, cb))


def union_count_vectors(ts1: TokenizedSentence, ts2: TokenizedSentence):
    """Aligned unigram count vectors over the union vocabulary of both sides."""
    c1 = ngram_multiset(ts1, 1)
    c2 = ngram_multiset(ts2, 1)
    vocab = sorted(set(c1) | set(c2))
    p = np.array([c1.get(w, 0) for w in vocab], dtype=np.float64)
    q = np.array([c2.get(w, 0) for w in vocab], dtype=np.float64)
    return p, q


def kl_divergence(p_counts, q_counts, epsilon: float = KL_EPSILON) -> float:
    """Sum p_i ln(p_i / q_i) after epsilon-smoothing and renormalizing both
    count vectors. Never infinite; asymmetric in general."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    p = np.asarray(p_counts, dtype=np.float64)
    q = np.asarray(q_counts, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError("count vectors must share the union vocabulary length")
    if p.size == 0:
        raise ValueError("empty count vectors")
    ps = p + epsilon
    qs = q + epsilon
    ps /= ps.sum()
    qs /= qs.sum()
    return float(np.sum(ps * np.log(ps / qs)))


def bleu(reference, hypothesis, max_n: int = 4, epsilon: float = BLEU_EPSILON) -> float:
    """Sentence-level BLEU over lowercased tokens, reference -> hypothesis.

    Geometric mean of modified n-gram precisions for n=1..max_n with brevity
    penalty; zero (or undefined) precisions are replaced by epsilon so the
    geometric mean stays defined.
    """
    ref = _as_sentence(reference)
    hyp = _as_sentence(hypothesis)
    len_r, len_h = len(ref.lower_tokens), len(hyp.lower_tokens)
    if len_h == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        hg = Counter(tuple(hyp.lower_tokens[i:i + n]) for i in range(len_h - n + 1))
        rg = Counter(tuple(ref.lower_tokens[i:i + n]) for i in range(len_r - n + 1))
        total = sum(hg.values())
        clipped = sum(min(c, rg.get(g, 0)) for g, c in hg.items())
        p_n = clipped / total if total > 0 and clipped > 0 else epsilon
        log_sum += math.log(p_n)
    bp = 1.0 if len_h > len_r else math.exp(1.0 - len_r / len_h)
    return min(1.0, bp * math.exp(log_sum / max_n))
