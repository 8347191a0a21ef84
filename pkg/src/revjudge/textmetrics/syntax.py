"""Syntactic statistics via pluggable providers.

The default Heuristic provider runs a rule-based chunker over the bundled
tag lexicon; no constituency parser is embedded. The Precomputed provider
reads exact values from a sidecar file produced by any external parser,
keyed by the tokenizer-versioned sentence hash.
"""

from dataclasses import dataclass
from pathlib import Path

from revjudge.errors import SidecarLookupError
from revjudge.textmetrics.base import (
    TokenizedSentence,
    has_alpha,
    sentence_hash,
    subordinators,
    tag_lexicon,
)

_NP_TAGS = {"det", "adj", "num", "noun", "pron"}
_NP_HEADS = {"noun", "pron"}
_VP_TAGS = {"aux", "verb", "adv"}
_VP_HEADS = {"aux", "verb"}


@dataclass(frozen=True)
class SyntaxStats:
    sbar_count: int
    vp_count: int
    np_count: int
    tree_height: int
    provider: str


def _guess_tag(tok: str) -> str:
    tags = tag_lexicon()
    t = tags.get(tok)
    if t is not None:
        return t
    if any(ch.isdigit() for ch in tok):
        return "num"
    if not has_alpha(tok):
        return "punct"
    if tok.endswith("ly"):
        return "adv"
    return "noun"


def _count_chunks(tags, member_tags, head_tags) -> int:
    count = 0
    in_run = False
    has_head = False
    for t in tags:
        if t in member_tags:
            in_run = True
            has_head = has_head or t in head_tags
        else:
            if in_run and has_head:
                count += 1
            in_run = False
            has_head = False
    if in_run and has_head:
        count += 1
    return count


class HeuristicSyntax:
    """Chunker-based estimates; always available."""

    name = "heuristic"

    def stats(self, ts: TokenizedSentence) -> SyntaxStats:
        if not ts.tokens:
            return SyntaxStats(0, 0, 0, 0, self.name)
        subs = subordinators()
        sbar = sum(1 for t in ts.lower_tokens if t in subs)
        tags = [_guess_tag(t) for t in ts.lower_tokens]
        np_count = _count_chunks(tags, _NP_TAGS, _NP_HEADS)
        vp_count = _count_chunks(tags, _VP_TAGS, _VP_HEADS)
        # height estimate: root + token layer, plus a phrase layer once any
        # chunk exists in a multi-token sentence, plus clause nesting
        height = 2
        if len(ts.tokens) >= 2 and (np_count + vp_count) >= 1:
            height += 1
        if sbar >= 1:
            height += 1 + min(sbar - 1, 3)
        return SyntaxStats(sbar, vp_count, np_count, height, self.name)


class SidecarSyntax:
    """Exact statistics precomputed by an external parser.

    Sidecar format: one record per line, tab-separated
    sentence_hash, sbar, vp, np, height.
    """

    name = "precomputed"

    def __init__(self, source, fallback: bool = False):
        if isinstance(source, (str, Path)):
            table = {}
            with open(source, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    key, sbar, vp, np_c, height = line.split("\t")
                    table[key] = (int(sbar), int(vp), int(np_c), int(height))
            self._table = table
        else:
            self._table = dict(source)
        self._fallback = HeuristicSyntax() if fallback else None

    def stats(self, ts: TokenizedSentence) -> SyntaxStats:
        key = sentence_hash(ts)
        rec = self._table.get(key)
        if rec is None:
            if self._fallback is not None:
                return self._fallback.stats(ts)
            raise SidecarLookupError(f"no sidecar entry for sentence hash {key}")
        return SyntaxStats(rec[0], rec[1], rec[2], rec[3], self.name)


_DEFAULT = HeuristicSyntax()


def syntax_stats(ts: TokenizedSentence, provider=None) -> SyntaxStats:
    return (provider or _DEFAULT).stats(ts)
