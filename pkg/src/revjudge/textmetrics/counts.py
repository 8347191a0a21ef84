"""Surface count statistics for a tokenized sentence."""

from dataclasses import dataclass

from revjudge.textmetrics.base import TokenizedSentence, named_entity_flags


@dataclass(frozen=True)
class CountStats:
    token_len: int
    char_len: int
    comma_count: int
    symbol_count: int
    ne_count: int


def count_stats(ts: TokenizedSentence) -> CountStats:
    """token/char lengths, commas, symbol tokens (no alphanumeric character),
    and named entities per the capitalization heuristic."""
    commas = sum(1 for t in ts.tokens if t == ",")
    symbols = sum(1 for t in ts.tokens if not any(ch.isalnum() for ch in t))
    ne = sum(named_entity_flags(ts))
    return CountStats(
        token_len=len(ts.tokens),
        char_len=len(ts.raw),
        comma_count=commas,
        symbol_count=symbols,
        ne_count=ne,
    )
