"""Feature schema and extraction tests, including the swap property and an
independent straightforward reference extractor."""

import random

import pytest

from revjudge.corpus import RevisionPair
from revjudge.errors import ConfigurationError
from revjudge.features import (
    COMMON,
    DENSE_FEATURES,
    ONLY_S1,
    ONLY_S2,
    FeatureSchema,
    build_schema,
    extract,
    extract_matrix,
    load_schema,
    save_schema,
)
from revjudge.synthdata import generate_corpus
from revjudge.textmetrics import (
    bleu,
    count_stats,
    error_counts,
    kl_divergence,
    levenshtein,
    ngram_multiset,
    specificity,
    syntax_stats,
    tokenize,
    union_count_vectors,
)

_DIFF_NAMES = [n for n in DENSE_FEATURES if n.endswith("_diff")]
_SIDE_SWAPS = [("spelling_s1", "spelling_s2"), ("grammar_s1", "grammar_s2"),
               ("specificity_s1", "specificity_s2")]


def reference_extract(pair, schema):
    """Single-pass reimplementation of the extraction contract, kept naive on
    purpose: every measurement is recomputed from the public operations."""
    t1, t2 = tokenize(pair.s1), tokenize(pair.s2)
    c1, c2 = count_stats(t1), count_stats(t2)
    e1, e2 = error_counts(t1), error_counts(t2)
    sp1, sp2 = specificity(t1).value, specificity(t2).value
    sy1, sy2 = syntax_stats(t1), syntax_stats(t2)
    p, q = union_count_vectors(t1, t2)
    dense = {
        "token_len_diff": c2.token_len - c1.token_len,
        "char_len_diff": c2.char_len - c1.char_len,
        "comma_diff": c2.comma_count - c1.comma_count,
        "symbol_diff": c2.symbol_count - c1.symbol_count,
        "ne_diff": c2.ne_count - c1.ne_count,
        "lev_char": levenshtein(pair.s1, pair.s2, "char"),
        "lev_token": levenshtein(pair.s1, pair.s2, "token"),
        "kl_s1_s2": kl_divergence(p, q),
        "kl_s2_s1": kl_divergence(q, p),
        "bleu": bleu(t1, t2),
        "spelling_s1": e1.spelling, "spelling_s2": e2.spelling,
        "spelling_diff": e2.spelling - e1.spelling,
        "grammar_s1": e1.grammar, "grammar_s2": e2.grammar,
        "grammar_diff": e2.grammar - e1.grammar,
        "specificity_s1": sp1, "specificity_s2": sp2,
        "specificity_diff": sp2 - sp1,
        "sbar_diff": sy2.sbar_count - sy1.sbar_count,
        "vp_diff": sy2.vp_count - sy1.vp_count,
        "np_diff": sy2.np_count - sy1.np_count,
        "height_diff": sy2.tree_height - sy1.tree_height,
    }
    values = {}
    for i, name in enumerate(schema.dense_features):
        if dense[name] != 0:
            values[i] = float(dense[name])
    for n in (1, 2, 3):
        g1, g2 = ngram_multiset(t1, n), ngram_multiset(t2, n)
        for (vn, gram, slot), col in schema.ngram_vocab.items():
            if vn != n:
                continue
            key = gram[0] if n == 1 else gram
            a, b = g1.get(key, 0), g2.get(key, 0)
            if slot == COMMON:
                v = min(a, b)
            elif slot == ONLY_S1:
                v = max(0, a - b)
            else:
                v = max(0, b - a)
            if v:
                values[col] = float(v)
    return values


def _swap(pair):
    return RevisionPair(id=pair.id + "-sw", s1=pair.s2, s2=pair.s1,
                        label=pair.label, source=pair.source)


def _sample_pairs(n, seed=0):
    pairs = [p for p, _ in generate_corpus()]
    rng = random.Random(seed)
    return rng.sample(pairs, n)


class TestBuildSchema:
    def test_slot_fixture(self):
        schema = build_schema([RevisionPair("1", "a b", "a c")], min_df=1)
        names = set(schema.column_names())
        assert {"Common:1:a", "OnlyS1:1:a", "OnlyS2:1:a",
                "Common:1:b", "Common:1:c"} <= names

    def test_min_df_two_prunes_singletons(self):
        schema = build_schema([RevisionPair("1", "x y", "x z")], min_df=2)
        assert schema.width == len(DENSE_FEATURES)

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError):
            build_schema([])

    def test_columns_dense_and_nonoverlapping(self):
        schema = build_schema(_sample_pairs(60), min_df=2)
        cols = sorted(schema.ngram_vocab.values())
        assert cols == list(range(len(DENSE_FEATURES), schema.width))

    def test_deterministic_fingerprint(self):
        pairs = _sample_pairs(40, seed=3)
        a = build_schema(pairs, min_df=2)
        b = build_schema(list(pairs), min_df=2)
        assert a.version == b.version and a.ngram_vocab == b.ngram_vocab


class TestExtract:
    def test_identity_like_pair(self):
        # s1 == s2 is rejected upstream; feed the extractor one directly to
        # check the identity contract of every pairwise feature
        pair = RevisionPair("x", "quite exactly the same text", "quite exactly the same text")
        schema = build_schema(
            [RevisionPair("b", "quite exactly the same text", "quite exactly the same words")],
            min_df=1)
        vec = extract(pair, schema)
        names = schema.column_names()
        got = {names[c]: v for c, v in vec.values.items()}
        for name in _DIFF_NAMES:
            assert got.get(name, 0.0) == 0.0
        assert got.get("lev_char", 0.0) == 0.0
        assert got["bleu"] == 1.0
        assert got.get("kl_s1_s2", 0.0) == pytest.approx(0.0, abs=1e-12)
        assert all(not k.startswith(("OnlyS1", "OnlyS2")) for k in got)

    def test_deletion_pair_direction(self):
        s1 = "The world, and in particular the technology is changing the way we communicate."
        s2 = "Technology is changing the way we communicate."
        pair = RevisionPair("d", s1, s2)
        schema = build_schema([pair], min_df=1)
        names = schema.column_names()
        got = {names[c]: v for c, v in extract(pair, schema).values.items()}
        assert got["token_len_diff"] < 0
        assert any(k.startswith("OnlyS1:") for k in got)
        assert not any(k.startswith("OnlyS2:") for k in got)

    def test_matches_reference_extractor(self):
        pairs = _sample_pairs(40, seed=7)
        schema = build_schema(pairs, min_df=2)
        for pair in pairs[:20]:
            got = extract(pair, schema).values
            want = reference_extract(pair, schema)
            assert set(got) == set(want)
            for col in want:
                assert got[col] == pytest.approx(want[col], abs=1e-12)

    def test_schema_version_guard(self):
        schema = build_schema([RevisionPair("1", "a b", "a c")], min_df=1)
        stale = FeatureSchema(ngram_vocab=schema.ngram_vocab,
                              dense_features=schema.dense_features,
                              tokenizer_version="wst-0",
                              min_df=schema.min_df, version=schema.version)
        with pytest.raises(ConfigurationError):
            extract(RevisionPair("1", "a b", "a c"), stale)

    def test_vector_indices_inside_schema(self):
        pairs = _sample_pairs(30, seed=9)
        schema = build_schema(pairs, min_df=2)
        for pair in pairs:
            vec = extract(pair, schema)
            assert all(0 <= c < schema.width for c in vec.values)
            assert vec.schema_version == schema.version


class TestSwapProperty:
    def test_swap_on_random_pairs(self):
        pairs = _sample_pairs(200, seed=11)
        schema = build_schema(pairs, min_df=2)
        names = schema.column_names()
        for pair in pairs:
            fwd = {names[c]: v for c, v in extract(pair, schema).values.items()}
            rev = {names[c]: v for c, v in extract(_swap(pair), schema).values.items()}
            for name in _DIFF_NAMES:
                assert rev.get(name, 0.0) == pytest.approx(-fwd.get(name, 0.0), abs=1e-9)
            assert rev.get("lev_char", 0.0) == fwd.get("lev_char", 0.0)
            assert rev.get("lev_token", 0.0) == fwd.get("lev_token", 0.0)
            assert rev.get("kl_s1_s2", 0.0) == pytest.approx(fwd.get("kl_s2_s1", 0.0), abs=1e-12)
            assert rev.get("kl_s2_s1", 0.0) == pytest.approx(fwd.get("kl_s1_s2", 0.0), abs=1e-12)
            for a, b in _SIDE_SWAPS:
                assert rev.get(a, 0.0) == pytest.approx(fwd.get(b, 0.0), abs=1e-12)
                assert rev.get(b, 0.0) == pytest.approx(fwd.get(a, 0.0), abs=1e-12)
            for key in set(fwd) | set(rev):
                if key.startswith("OnlyS1:"):
                    other = "OnlyS2:" + key[len("OnlyS1:"):]
                    assert rev.get(other, 0.0) == fwd.get(key, 0.0)
                elif key.startswith("Common:"):
                    assert rev.get(key, 0.0) == fwd.get(key, 0.0)


class TestMatrixAndSerialization:
    def test_matrix_shape_and_content(self):
        pairs = _sample_pairs(25, seed=13)
        schema = build_schema(pairs, min_df=2)
        m = extract_matrix(pairs, schema)
        assert m.shape == (25, schema.width)
        vec = extract(pairs[3], schema)
        row = m.getrow(3).toarray().ravel()
        for col, v in vec.values.items():
            assert row[col] == v

    def test_save_load_roundtrip(self, tmp_path):
        schema = build_schema(_sample_pairs(30, seed=15), min_df=2)
        path = tmp_path / "schema.tsv"
        save_schema(schema, path)
        loaded = load_schema(path)
        assert loaded == schema

    def test_tampered_file_rejected(self, tmp_path):
        schema = build_schema(_sample_pairs(10, seed=17), min_df=2)
        path = tmp_path / "schema.tsv"
        save_schema(schema, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) > 2
        a, b = lines[1].split("\t"), lines[2].split("\t")
        a[3], b[3] = b[3], a[3]
        # reassigning columns between grams must break the fingerprint
        lines[1], lines[2] = "\t".join(a), "\t".join(b)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_schema(path)
