"""Per-pair feature assembly under a fold-local schema.

The n-gram vocabulary is built exclusively from training-fold pairs so no
test-fold text leaks into the representation. Every "diff" dense feature is
oriented S2 - S1: the label is about the revision improving on the original.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from revjudge.errors import ConfigurationError
from revjudge.textmetrics import TOKENIZER_VERSION, MetricsEngine

COMMON = "Common"
ONLY_S1 = "OnlyS1"
ONLY_S2 = "OnlyS2"
_SLOTS = (COMMON, ONLY_S1, ONLY_S2)

DENSE_FEATURES = (
    "token_len_diff", "char_len_diff", "comma_diff", "symbol_diff", "ne_diff",
    "lev_char", "lev_token", "kl_s1_s2", "kl_s2_s1", "bleu",
    "spelling_s1", "spelling_s2", "spelling_diff",
    "grammar_s1", "grammar_s2", "grammar_diff",
    "specificity_s1", "specificity_s2", "specificity_diff",
    "sbar_diff", "vp_diff", "np_diff", "height_diff",
)

MIN_DF_DEFAULT = 2


@dataclass(frozen=True)
class FeatureSchema:
    ngram_vocab: dict  # (n, gram tuple, slot) -> column index
    dense_features: tuple
    tokenizer_version: str
    min_df: int
    version: str

    @property
    def width(self) -> int:
        return len(self.dense_features) + len(self.ngram_vocab)

    def column_names(self) -> list:
        names = list(self.dense_features) + [None] * len(self.ngram_vocab)
        for (n, gram, slot), col in self.ngram_vocab.items():
            names[col] = f"{slot}:{n}:{' '.join(gram)}"
        return names


@dataclass(frozen=True)
class FeatureVector:
    schema_version: str
    values: dict  # column index -> value, zero entries omitted


def _gram_tuple(key):
    return (key,) if isinstance(key, str) else key


def _fingerprint(tokenizer_version, min_df, dense, vocab_items):
    h = hashlib.sha1()
    h.update(f"{tokenizer_version}\n{min_df}\n".encode("utf-8"))
    h.update("\n".join(dense).encode("utf-8"))
    for (n, gram, slot), col in vocab_items:
        h.update(f"\n{n}\t{' '.join(gram)}\t{slot}\t{col}".encode("utf-8"))
    return h.hexdigest()[:16]


def build_schema(training_pairs, min_df: int = MIN_DF_DEFAULT,
                 engine: MetricsEngine = None) -> FeatureSchema:
    """Schema over the dense columns plus every n-gram (n=1..3) whose pair
    document frequency in the training material reaches min_df."""
    training_pairs = list(training_pairs)
    if not training_pairs:
        raise ValueError("cannot build a schema from an empty training set")
    eng = engine or MetricsEngine()
    df = {}
    for pair in training_pairs:
        p1 = eng.sentence_profile(pair.s1)
        p2 = eng.sentence_profile(pair.s2)
        seen = set()
        for n in (1, 2, 3):
            for key in p1.grams[n]:
                seen.add((n, _gram_tuple(key)))
            for key in p2.grams[n]:
                seen.add((n, _gram_tuple(key)))
        for item in seen:
            df[item] = df.get(item, 0) + 1

    kept = sorted(item for item, count in df.items() if count >= min_df)
    vocab = {}
    col = len(DENSE_FEATURES)
    for n, gram in kept:
        for slot in _SLOTS:
            vocab[(n, gram, slot)] = col
            col += 1
    version = _fingerprint(TOKENIZER_VERSION, min_df, DENSE_FEATURES,
                           sorted(vocab.items(), key=lambda kv: kv[1]))
    return FeatureSchema(ngram_vocab=vocab, dense_features=DENSE_FEATURES,
                         tokenizer_version=TOKENIZER_VERSION, min_df=min_df,
                         version=version)


def _dense_values(pair, eng):
    p1 = eng.sentence_profile(pair.s1)
    p2 = eng.sentence_profile(pair.s2)
    pp = eng.pair_profile(pair.s1, pair.s2)
    c1, c2 = p1.counts, p2.counts
    return {
        "token_len_diff": c2.token_len - c1.token_len,
        "char_len_diff": c2.char_len - c1.char_len,
        "comma_diff": c2.comma_count - c1.comma_count,
        "symbol_diff": c2.symbol_count - c1.symbol_count,
        "ne_diff": c2.ne_count - c1.ne_count,
        "lev_char": pp.lev_char,
        "lev_token": pp.lev_token,
        "kl_s1_s2": pp.kl_s1_s2,
        "kl_s2_s1": pp.kl_s2_s1,
        "bleu": pp.bleu,
        "spelling_s1": p1.errors.spelling,
        "spelling_s2": p2.errors.spelling,
        "spelling_diff": p2.errors.spelling - p1.errors.spelling,
        "grammar_s1": p1.errors.grammar,
        "grammar_s2": p2.errors.grammar,
        "grammar_diff": p2.errors.grammar - p1.errors.grammar,
        "specificity_s1": p1.specificity,
        "specificity_s2": p2.specificity,
        "specificity_diff": p2.specificity - p1.specificity,
        "sbar_diff": p2.syntax.sbar_count - p1.syntax.sbar_count,
        "vp_diff": p2.syntax.vp_count - p1.syntax.vp_count,
        "np_diff": p2.syntax.np_count - p1.syntax.np_count,
        "height_diff": p2.syntax.tree_height - p1.syntax.tree_height,
    }


def extract(pair, schema: FeatureSchema, engine: MetricsEngine = None) -> FeatureVector:
    """Sparse feature vector for one pair under the given schema."""
    if schema.tokenizer_version != TOKENIZER_VERSION:
        raise ConfigurationError(
            f"schema was built with tokenizer {schema.tokenizer_version}, "
            f"current is {TOKENIZER_VERSION}")
    eng = engine or MetricsEngine()
    values = {}
    dense = _dense_values(pair, eng)
    for i, name in enumerate(schema.dense_features):
        v = float(dense[name])
        if v != 0.0:
            values[i] = v

    p1 = eng.sentence_profile(pair.s1)
    p2 = eng.sentence_profile(pair.s2)
    vocab = schema.ngram_vocab
    for n in (1, 2, 3):
        g1, g2 = p1.grams[n], p2.grams[n]
        common = g1 & g2
        only1 = g1 - g2
        only2 = g2 - g1
        for counter, slot in ((common, COMMON), (only1, ONLY_S1), (only2, ONLY_S2)):
            for key, count in counter.items():
                col = vocab.get((n, _gram_tuple(key), slot))
                if col is not None:
                    values[col] = float(count)
    return FeatureVector(schema_version=schema.version, values=values)


def extract_matrix(pairs, schema: FeatureSchema, engine: MetricsEngine = None):
    """CSR matrix of feature vectors, one row per pair."""
    eng = engine or MetricsEngine()
    indptr = [0]
    indices = []
    data = []
    for pair in pairs:
        vec = extract(pair, schema, eng)
        cols = sorted(vec.values)
        indices.extend(cols)
        data.extend(vec.values[c] for c in cols)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64),
         np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, schema.width))


def dumps_schema(schema: FeatureSchema) -> str:
    """Versioned flat text: a fingerprint header line, then the column table."""
    lines = [json.dumps({
        "version": schema.version,
        "tokenizer_version": schema.tokenizer_version,
        "min_df": schema.min_df,
        "dense": list(schema.dense_features),
    })]
    for (n, gram, slot), col in sorted(schema.ngram_vocab.items(), key=lambda kv: kv[1]):
        lines.append(f"{n}\t{' '.join(gram)}\t{slot}\t{col}")
    return "\n".join(lines) + "\n"


def save_schema(schema: FeatureSchema, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_schema(schema))


def loads_schema(text: str) -> FeatureSchema:
    lines = text.splitlines()
    if not lines:
        raise ConfigurationError("empty schema text")
    header = json.loads(lines[0])
    vocab = {}
    for line in lines[1:]:
        if not line:
            continue
        n, gram, slot, col = line.split("\t")
        vocab[(int(n), tuple(gram.split(" ")), slot)] = int(col)
    schema = FeatureSchema(ngram_vocab=vocab, dense_features=tuple(header["dense"]),
                           tokenizer_version=header["tokenizer_version"],
                           min_df=header["min_df"], version=header["version"])
    expect = _fingerprint(schema.tokenizer_version, schema.min_df, schema.dense_features,
                          sorted(vocab.items(), key=lambda kv: kv[1]))
    if expect != schema.version:
        raise ConfigurationError("schema fingerprint mismatch")
    return schema


def load_schema(path) -> FeatureSchema:
    with open(path, encoding="utf-8") as fh:
        return loads_schema(fh.read())
