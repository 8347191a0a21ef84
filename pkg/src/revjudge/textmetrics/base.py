"""Tokenization and bundled lexicon access.

The tokenizer is shared corpus-wide and versioned: sidecar files and feature
schemas embed TOKENIZER_VERSION, so changing its behavior must bump the
constant to invalidate anything keyed on token output.
"""

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from revjudge.errors import ConfigurationError

TOKENIZER_VERSION = "wst-1"

DATA_DIR = Path(__file__).resolve().parent / "data"

# punctuation peeled off chunk edges into standalone tokens; interior
# apostrophes and hyphens are never touched
_PEEL = set(".,;:!?()[]{}\"'`…“”‘’")

_ALPHA_RE = re.compile(r"[A-Za-z]")
_WORD_RE = re.compile(r"[A-Za-z]+(?:['-][A-Za-z]+)*\Z")


@dataclass(frozen=True)
class TokenizedSentence:
    raw: str
    tokens: tuple
    lower_tokens: tuple

    def __len__(self):
        return len(self.tokens)


def tokenize(text: str) -> TokenizedSentence:
    """Whitespace split with terminal/clause punctuation peeled into its own
    tokens. "Hello, world." -> [Hello] [,] [world] [.]"""
    tokens = []
    for chunk in text.split():
        lead = []
        while chunk and chunk[0] in _PEEL:
            lead.append(chunk[0])
            chunk = chunk[1:]
        tail = []
        while chunk and chunk[-1] in _PEEL:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    toks = tuple(tokens)
    return TokenizedSentence(raw=text, tokens=toks,
                             lower_tokens=tuple(t.lower() for t in toks))


def has_alpha(token: str) -> bool:
    return _ALPHA_RE.search(token) is not None


def is_word_token(token: str) -> bool:
    """Alphabetic token, allowing interior apostrophes and hyphens."""
    return _WORD_RE.match(token) is not None


def sentence_hash(ts: TokenizedSentence) -> str:
    """Normalized-sentence key for sidecar lookups; includes the tokenizer
    version so stale sidecars miss instead of silently mismatching."""
    payload = TOKENIZER_VERSION + "\n" + " ".join(ts.lower_tokens)
    return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


def _read_lines(path: Path):
    if not path.is_file():
        raise ConfigurationError(f"missing lexicon data file: {path}")
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                yield line


@lru_cache(maxsize=None)
def dictionary_words(path=None) -> frozenset:
    p = Path(path) if path else DATA_DIR / "dictionary.txt"
    return frozenset(_read_lines(p))


@lru_cache(maxsize=None)
def tag_lexicon(path=None) -> dict:
    p = Path(path) if path else DATA_DIR / "taglex.tsv"
    out = {}
    for line in _read_lines(p):
        form, tag = line.split("\t")
        out[form] = tag
    return out


@lru_cache(maxsize=None)
def zipf_table(path=None) -> dict:
    p = Path(path) if path else DATA_DIR / "wordfreq.tsv"
    out = {}
    for line in _read_lines(p):
        form, z = line.split("\t")
        out[form] = float(z)
    return out


@lru_cache(maxsize=None)
def subordinators(path=None) -> frozenset:
    p = Path(path) if path else DATA_DIR / "subordinators.txt"
    return frozenset(_read_lines(p))


@lru_cache(maxsize=None)
def connectives(path=None) -> frozenset:
    p = Path(path) if path else DATA_DIR / "connectives.txt"
    return frozenset(_read_lines(p))


def first_word_index(ts: TokenizedSentence):
    for i, tok in enumerate(ts.tokens):
        if has_alpha(tok):
            return i
    return None


def named_entity_flags(ts: TokenizedSentence, dictionary=None) -> list:
    """Capitalization heuristic: a capitalized alphabetic token is treated as
    a named entity when it is not sentence-initial, or when it is
    sentence-initial but its lowercase form is not a dictionary word."""
    if dictionary is None:
        dictionary = dictionary_words()
    first = first_word_index(ts)
    flags = []
    for i, tok in enumerate(ts.tokens):
        ne = False
        if is_word_token(tok) and tok[0].isupper():
            if i != first:
                ne = True
            elif tok.lower() not in dictionary:
                ne = True
        flags.append(ne)
    return flags
