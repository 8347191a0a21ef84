"""N-gram multisets over lowercased tokens."""

from collections import Counter

from revjudge.textmetrics.base import TokenizedSentence


def ngram_multiset(ts: TokenizedSentence, n: int) -> Counter:
    """Multiset of n-grams over lower_tokens. Unigram keys are plain strings,
    higher orders use token tuples. Total multiplicity = max(0, len - n + 1)."""
    if n not in (1, 2, 3):
        raise ValueError(f"n must be 1, 2 or 3, got {n}")
    toks = ts.lower_tokens
    if n == 1:
        return Counter(toks)
    return Counter(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))


def multiset_common(a: Counter, b: Counter) -> Counter:
    return a & b


def multiset_only(a: Counter, b: Counter) -> Counter:
    return a - b
