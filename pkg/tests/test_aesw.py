"""Edit-markup parsing, pair reconstruction, sampling, and label flipping."""

import io
import math

import pytest

from revjudge.aesw import (
    DEFAULT_PLACEHOLDERS,
    EditedSentence,
    SampleConfig,
    contains_placeholder,
    dev_split,
    eligible_pairs,
    export_pairs,
    flip_labels,
    flip_mask,
    load_exported,
    parse_aesw,
    reconstruct_pair,
    sample_pairs,
)
from revjudge.corpus import BETTER, NOT_BETTER, RevisionPair
from revjudge.errors import CapacityError, MarkupError, UnsupportedStructureError
from revjudge.synthdata import generate_aesw_sgml


def _parse(doc):
    return list(parse_aesw(io.StringIO(doc)))


def _pairs(n, prefix="p"):
    return [RevisionPair(id=f"{prefix}{i}", s1=f"old sentence {i}",
                         s2=f"new sentence {i}", label=BETTER, source="AESW",
                         meta={"sid": f"{prefix}{i}"})
            for i in range(n)]


class TestParseAesw:
    def test_comma_insertion(self):
        got = _parse('<sentence sid="s1">This is numerically expensive'
                     '<ins>,</ins> but leads to proper results.</sentence>')
        assert len(got) == 1
        es = got[0]
        ins = [(k, t) for k, t in es.segments if k == "inserted"]
        assert ins == [("inserted", ",")]
        pair = reconstruct_pair(es)
        assert pair.s1 == "This is numerically expensive but leads to proper results."
        assert pair.s2 == "This is numerically expensive, but leads to proper results."

    def test_unedited_sentence(self):
        es = _parse('<sentence sid="s2">Nothing changed here.</sentence>')[0]
        assert not es.has_edits
        assert reconstruct_pair(es) is None

    def test_del_ins_concatenation(self):
        es = _parse('<sentence sid="s3"><del>a</del><ins>b</ins>c</sentence>')[0]
        assert es.original() == "ac"
        assert es.revised() == "bc"

    def test_document_order_and_ids(self):
        doc = "<corpus>\n" + "\n".join(
            f'<sentence sid="s{i}">word <del>x{i}</del> here</sentence>' for i in range(5)
        ) + "\n</corpus>"
        got = _parse(doc)
        assert [es.sid for es in got] == [f"s{i}" for i in range(5)]

    def test_nested_spans_rejected(self):
        with pytest.raises(UnsupportedStructureError):
            _parse('<sentence sid="s4">a <del>b <ins>c</ins></del></sentence>')

    def test_unbalanced_markup_names_sentence(self):
        with pytest.raises(MarkupError) as err:
            _parse('<sentence sid="s5">a <del>b</sentence>')
        assert "s5" in str(err.value)

    def test_stray_close_rejected(self):
        with pytest.raises(MarkupError):
            _parse('<sentence sid="s6">a b</del></sentence>')

    def test_entity_unescaping(self):
        es = _parse('<sentence sid="s7">a &amp; b <ins>&lt;c&gt;</ins></sentence>')[0]
        assert es.original() == "a & b "
        assert es.revised() == "a & b <c>"

    def test_multiline_element(self):
        es = _parse('<sentence sid="s8">first part\n<ins>added</ins>\nlast part</sentence>')[0]
        assert "added" in es.revised() and "added" not in es.original()

    def test_unterminated_element(self):
        with pytest.raises(MarkupError):
            _parse('<sentence sid="s9">never closed')


class TestReconstruct:
    def test_rewrite_pair(self):
        es = _parse('<sentence sid="r1"><del>Section 2 formulates and solves the '
                    'balance equations.</del><ins>The balance equations are formulated '
                    'and solved in Section 2.</ins></sentence>')[0]
        pair = reconstruct_pair(es)
        assert pair.label == BETTER and pair.source == "AESW"
        assert pair.s1.startswith("Section 2 formulates")
        assert pair.s2.startswith("The balance equations")

    def test_delete_reinsert_identical_is_none(self):
        es = _parse('<sentence sid="r2">a <del>same</del><ins>same</ins> b</sentence>')[0]
        assert reconstruct_pair(es) is None

    def test_whitespace_only_change_is_none(self):
        es = _parse('<sentence sid="r3">a <del> </del> b</sentence>')[0]
        assert reconstruct_pair(es) is None

    def test_case_change_survives(self):
        # normalization collapses whitespace only, never case
        es = _parse('<sentence sid="r4"><del>the</del><ins>The</ins> result</sentence>')[0]
        assert reconstruct_pair(es) is not None

    def test_segment_roundtrip_inverse(self):
        body = 'Keep <del>old words</del><ins>new words</ins> and <ins>more</ins> text'
        es = _parse(f'<sentence sid="r5">{body}</sentence>')[0]
        # removing inserted text from revised and deleted text from original
        # are inverse edits: both reduce to the kept backbone
        kept = "".join(t for k, t in es.segments if k == "kept")
        orig, rev = es.original(), es.revised()
        for k, t in es.segments:
            if k == "deleted":
                orig = orig.replace(t, "", 1)
            elif k == "inserted":
                rev = rev.replace(t, "", 1)
        assert orig == kept == rev


class TestPlaceholders:
    def test_math_detected(self):
        assert contains_placeholder("Let MATH denote the bound.")

    def test_plain_text(self):
        assert not contains_placeholder("Let x denote the bound.")

    def test_empty(self):
        assert not contains_placeholder("")

    def test_punctuation_adjacent(self):
        assert contains_placeholder("as shown in REF, above")

    def test_substring_not_matched(self):
        assert not contains_placeholder("MATHEMATICS is fun")

    def test_custom_set(self):
        assert contains_placeholder("see EQN here", frozenset({"EQN"}))


class TestSampling:
    def test_exact_count_and_repeatability(self):
        pool = _pairs(600)
        cfg = SampleConfig(n=500, mode="All", seed=11)
        a = sample_pairs(pool, cfg)
        b = sample_pairs(pool, cfg)
        assert len(a) == 500
        assert [p.id for p in a] == [p.id for p in b]

    def test_different_seeds_differ(self):
        pool = _pairs(600)
        a = sample_pairs(pool, SampleConfig(n=500, seed=1))
        b = sample_pairs(pool, SampleConfig(n=500, seed=2))
        assert [p.id for p in a] != [p.id for p in b]

    def test_capacity_error_reports_eligible(self):
        pool = [RevisionPair(id="m1", s1="MATH grows", s2="MATH grows, fast",
                             label=BETTER, source="AESW")]
        with pytest.raises(CapacityError) as err:
            sample_pairs(pool, SampleConfig(n=1, mode="Plaintext", seed=0))
        assert "0" in str(err.value)

    def test_n_equal_eligible(self):
        pool = _pairs(40)
        got = sample_pairs(pool, SampleConfig(n=40, seed=3))
        assert sorted(p.id for p in got) == sorted(p.id for p in pool)

    def test_plaintext_excludes_placeholders(self):
        pool = _pairs(30)
        pool.append(RevisionPair(id="ph", s1="the MATH term", s2="the MATH term, improved",
                                 label=BETTER, source="AESW"))
        got = sample_pairs(pool, SampleConfig(n=30, mode="Plaintext", seed=5))
        assert all("MATH" not in p.s1 and "MATH" not in p.s2 for p in got)

    def test_bad_config(self):
        with pytest.raises(ValueError):
            SampleConfig(n=0)
        with pytest.raises(ValueError):
            SampleConfig(n=1, mode="Some")
        with pytest.raises(ValueError):
            SampleConfig(n=1, flip_prob=1.5)


class TestFlipping:
    def test_prob_zero_identity(self):
        pool = _pairs(50)
        got = flip_labels(pool, 0.0, seed=7)
        assert all(g.s1 == p.s1 and g.label == BETTER for g, p in zip(got, pool))

    def test_prob_one_all_flipped(self):
        pool = _pairs(50)
        got = flip_labels(pool, 1.0, seed=7)
        for g, p in zip(got, pool):
            assert (g.s1, g.s2) == (p.s2, p.s1)
            assert g.label == NOT_BETTER
            assert g.meta.get("flipped") == "true"

    def test_half_prob_within_three_sigma(self):
        pool = _pairs(5000)
        got = flip_labels(pool, 0.5, seed=13)
        flipped = sum(1 for g in got if g.label == NOT_BETTER)
        sigma3 = 3 * math.sqrt(5000 * 0.25)
        assert abs(flipped - 2500) <= sigma3

    def test_same_mask_twice_is_identity_on_text(self):
        pool = _pairs(100)
        mask = flip_mask(len(pool), 0.5, seed=21)
        once = flip_labels(pool, 0.5, seed=21)
        # swapping the same positions again restores the original texts
        for p, q, m in zip(pool, once, mask):
            r = (q.s2, q.s1) if m else (q.s1, q.s2)
            assert r == (p.s1, p.s2)

    def test_notbetter_input_rejected(self):
        bad = _pairs(1)
        bad[0].label = NOT_BETTER
        with pytest.raises(ValueError):
            flip_labels(bad, 0.5, seed=1)

    def test_deterministic(self):
        pool = _pairs(200)
        a = flip_labels(pool, 0.5, seed=3)
        b = flip_labels(pool, 0.5, seed=3)
        assert [p.label for p in a] == [p.label for p in b]


class TestDevSplitAndExport:
    def test_dev_split_sizes_and_disjoint(self):
        pool = _pairs(200)
        dev, rest = dev_split(pool, fraction=0.1, seed=5)
        assert len(dev) == 20 and len(rest) == 180
        assert {p.id for p in dev}.isdisjoint({p.id for p in rest})

    def test_dev_split_deterministic(self):
        pool = _pairs(100)
        a, _ = dev_split(pool, seed=9)
        b, _ = dev_split(pool, seed=9)
        assert [p.id for p in a] == [p.id for p in b]

    def test_export_load_roundtrip(self):
        pool = flip_labels(_pairs(30), 0.5, seed=2)
        buf = io.StringIO()
        export_pairs(pool, buf)
        buf.seek(0)
        back = load_exported(buf)
        assert [(p.s1, p.s2, p.label) for p in back] == \
            [(p.s1, p.s2, p.label) for p in pool]


class TestSyntheticSgml:
    def test_generator_counts(self):
        doc = generate_aesw_sgml(800, seed=1)
        sentences = _parse(doc)
        assert len(sentences) == 800
        pairs = [reconstruct_pair(es) for es in sentences]
        pairs = [p for p in pairs if p is not None]
        cfg = SampleConfig(n=1, mode="Plaintext", seed=0)
        plain = eligible_pairs(pairs, cfg)
        # enough material for a 500-pair plaintext sample
        assert len(plain) >= 500
        assert len(pairs) - len(plain) > 0  # some placeholder-bearing edits exist

    def test_generator_deterministic(self):
        assert generate_aesw_sgml(100, seed=4) == generate_aesw_sgml(100, seed=4)
