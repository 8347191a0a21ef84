"""Rule-based spelling and grammar error counting.

Spelling: alphabetic tokens absent from the bundled dictionary, with tokens
accepted by the named-entity heuristic exempted. Grammar: a small explicit
rule set shipped as data (see data/grammar_rules.tsv), counted per firing.
"""

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from revjudge.errors import ConfigurationError
from revjudge.textmetrics.base import (
    DATA_DIR,
    TokenizedSentence,
    dictionary_words,
    first_word_index,
    is_word_token,
    named_entity_flags,
    tag_lexicon,
)

_KNOWN_RULES = ("a_an", "double_word", "initial_lowercase", "sv_number", "unmatched_pair")

_VERB_SUFFIX_BLOCK = ("s", "ed", "ing")


@dataclass(frozen=True)
class ErrorCounts:
    spelling: int
    grammar: int


@dataclass(frozen=True)
class CheckerConfig:
    dictionary_path: str = None
    rules_path: str = None


@lru_cache(maxsize=None)
def _load_rules(path=None):
    p = Path(path) if path else DATA_DIR / "grammar_rules.tsv"
    if not p.is_file():
        raise ConfigurationError(f"missing grammar rule file: {p}")
    rules = []
    with open(p, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            rule_id, params, _desc = line.split("\t")
            if rule_id not in _KNOWN_RULES:
                raise ConfigurationError(f"unknown grammar rule id: {rule_id}")
            kv = {}
            if params != "-":
                for part in params.split(";"):
                    k, v = part.split("=", 1)
                    kv[k] = v
            rules.append((rule_id, kv))
    return tuple(rules)


def _fire_a_an(ts, params):
    vowels = set(params.get("vowels", "aeiou"))
    hits = 0
    toks = ts.tokens
    for i in range(len(toks) - 1):
        nxt = toks[i + 1]
        if not (is_word_token(nxt) and nxt[0].isalpha()):
            continue
        art = toks[i].lower()
        starts_vowel = nxt[0].lower() in vowels
        if art == "a" and starts_vowel:
            hits += 1
        elif art == "an" and not starts_vowel:
            hits += 1
    return hits


def _fire_double_word(ts, params):
    hits = 0
    lo = ts.lower_tokens
    for i in range(len(lo) - 1):
        if lo[i] == lo[i + 1] and is_word_token(ts.tokens[i]):
            hits += 1
    return hits


def _fire_initial_lowercase(ts, params):
    first = first_word_index(ts)
    if first is None:
        return 0
    tok = ts.tokens[first]
    return 1 if tok[0].isalpha() and tok[0].islower() else 0


def _fire_sv_number(ts, params):
    dets = set(params.get("dets", "a,an,one,this,each,every").split(","))
    tags = tag_lexicon()
    hits = 0
    lo = ts.lower_tokens
    for i in range(len(lo) - 2):
        if lo[i] not in dets:
            continue
        if tags.get(lo[i + 1]) != "noun":
            continue
        verb = lo[i + 2]
        if tags.get(verb) == "verb" and not verb.endswith(_VERB_SUFFIX_BLOCK):
            hits += 1
    return hits


def _fire_unmatched_pair(ts, params):
    pairs = params.get("pairs", "()[]")
    hits = 0
    for k in range(0, len(pairs) - 1, 2):
        if ts.raw.count(pairs[k]) != ts.raw.count(pairs[k + 1]):
            hits += 1
    if ts.raw.count('"') % 2 == 1:
        hits += 1
    return hits


_RULE_FNS = {
    "a_an": _fire_a_an,
    "double_word": _fire_double_word,
    "initial_lowercase": _fire_initial_lowercase,
    "sv_number": _fire_sv_number,
    "unmatched_pair": _fire_unmatched_pair,
}


def grammar_rule_hits(ts: TokenizedSentence, checker_config: CheckerConfig = None) -> dict:
    """Per-rule firing counts; error_counts().grammar is their sum."""
    cfg = checker_config or CheckerConfig()
    rules = _load_rules(cfg.rules_path)
    return {rule_id: _RULE_FNS[rule_id](ts, params) for rule_id, params in rules}


def error_counts(ts: TokenizedSentence, checker_config: CheckerConfig = None) -> ErrorCounts:
    cfg = checker_config or CheckerConfig()
    dictionary = dictionary_words(cfg.dictionary_path)
    rules = _load_rules(cfg.rules_path)

    ne = named_entity_flags(ts, dictionary)
    spelling = 0
    for tok, is_ne in zip(ts.tokens, ne):
        if is_ne or not is_word_token(tok):
            continue
        if tok.lower() not in dictionary:
            spelling += 1

    grammar = 0
    for rule_id, params in rules:
        grammar += _RULE_FNS[rule_id](ts, params)
    return ErrorCounts(spelling=spelling, grammar=grammar)
