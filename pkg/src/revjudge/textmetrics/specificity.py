"""Shallow-cue specificity scoring.

A logistic model over five transparent cues: token count, numeral count,
capitalized-token count, mean inverse document frequency (from the bundled
frequency table), and connective count. Exact parity with any external
specificity tool is a non-goal; the contract is monotonicity fixtures.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from revjudge.errors import ConfigurationError
from revjudge.textmetrics.base import (
    DATA_DIR,
    TokenizedSentence,
    connectives,
    is_word_token,
    zipf_table,
)

# words missing from the frequency table are treated as very rare
_UNKNOWN_ZIPF = 2.0
_ZIPF_CEILING = 8.0


@dataclass(frozen=True)
class SpecificityScore:
    value: float


@lru_cache(maxsize=None)
def load_weights(path=None) -> dict:
    p = Path(path) if path else DATA_DIR / "specificity_weights.tsv"
    if not p.is_file():
        raise ConfigurationError(f"missing specificity weight file: {p}")
    out = {}
    with open(p, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                name, val = line.split("\t")
                out[name] = float(val)
    return out


def cue_values(ts: TokenizedSentence) -> dict:
    toks = ts.tokens
    n_numeral = sum(1 for t in toks if any(ch.isdigit() for ch in t))
    n_caps = sum(1 for t in toks if is_word_token(t) and t[0].isupper())
    conn = connectives()
    n_conn = sum(1 for t in ts.lower_tokens if t in conn)

    zipf = zipf_table()
    idfs = [max(0.0, _ZIPF_CEILING - zipf.get(t, _UNKNOWN_ZIPF))
            for t in ts.lower_tokens if is_word_token(t)]
    mean_idf = sum(idfs) / len(idfs) if idfs else 0.0

    return {
        "token_count": math.tanh(len(toks) / 20.0),
        "numeral_count": math.tanh(n_numeral / 2.0),
        "cap_count": math.tanh(n_caps / 3.0),
        "mean_idf": mean_idf / _ZIPF_CEILING,
        "connective_count": math.tanh(n_conn / 2.0),
    }


def specificity(ts: TokenizedSentence, model_weights: dict = None) -> SpecificityScore:
    w = model_weights or load_weights()
    z = w.get("bias", 0.0)
    for name, val in cue_values(ts).items():
        z += w.get(name, 0.0) * val
    return SpecificityScore(value=1.0 / (1.0 + math.exp(-z)))
