"""Professionally edited sentences: SGML parsing, pair reconstruction,
placeholder filtering, sampling, and label flipping.

The edit format marks original-only text with <del>...</del> and revised-only
text with <ins>...</ins> inside <sentence sid="..."> elements. Concatenating
Kept+Deleted segments yields the original sentence; Kept+Inserted yields the
revised one. Spans never nest; a nested span is a structural error, not data.
"""

import json
import random
import re
from dataclasses import dataclass, field
from xml.sax.saxutils import unescape

from revjudge.corpus import BETTER, NOT_BETTER, RevisionPair
from revjudge.errors import CapacityError, MarkupError, UnsupportedStructureError
from revjudge.textmetrics import tokenize

KEPT = "kept"
DELETED = "deleted"
INSERTED = "inserted"

DEFAULT_PLACEHOLDERS = frozenset({"MATH", "MATHDISP", "MATHDISPS", "CITE", "REF"})

_SENT_OPEN = re.compile(r"<sentence\b[^>]*>", re.IGNORECASE)
_SID_ATTR = re.compile(r"""\b(?:sid|id)\s*=\s*["']([^"']*)["']""", re.IGNORECASE)
_TAG = re.compile(r"</?(?:ins|del)>", re.IGNORECASE)


@dataclass
class EditedSentence:
    sid: str
    segments: list
    genre: str = None

    @property
    def has_edits(self) -> bool:
        return any(kind != KEPT and text for kind, text in self.segments)

    def original(self) -> str:
        return "".join(text for kind, text in self.segments if kind in (KEPT, DELETED))

    def revised(self) -> str:
        return "".join(text for kind, text in self.segments if kind in (KEPT, INSERTED))


@dataclass(frozen=True)
class SampleConfig:
    n: int
    mode: str = "All"
    flip_prob: float = 0.5
    seed: int = 0
    placeholder_tokens: frozenset = field(default=DEFAULT_PLACEHOLDERS)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample size must be >= 1")
        if self.mode not in ("All", "Plaintext"):
            raise ValueError(f"mode must be 'All' or 'Plaintext', got {self.mode!r}")
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ValueError("flip_prob must lie in [0, 1]")


def _parse_body(body: str, sid: str) -> list:
    segments = []
    pos = 0
    open_kind = None
    for m in _TAG.finditer(body):
        text = unescape(body[pos:m.start()])
        if text:
            segments.append((open_kind or KEPT, text))
        tag = m.group(0).lower()
        if tag in ("<ins>", "<del>"):
            kind = INSERTED if tag == "<ins>" else DELETED
            if open_kind is not None:
                raise UnsupportedStructureError(
                    f"nested {tag} inside open {open_kind} span", sid)
            open_kind = kind
        else:
            kind = INSERTED if tag == "</ins>" else DELETED
            if open_kind != kind:
                raise MarkupError(f"unbalanced closing tag {tag}", sid)
            open_kind = None
        pos = m.end()
    if open_kind is not None:
        raise MarkupError(f"unclosed {open_kind} span", sid)
    tail = unescape(body[pos:])
    if tail:
        segments.append((KEPT, tail))
    return segments


def parse_aesw(stream):
    """Yield EditedSentence objects from an SGML/XML edit file in document
    order. stream is an iterable of text lines."""
    buffer = None
    sid = None
    for line in stream:
        while line:
            if buffer is None:
                m = _SENT_OPEN.search(line)
                if m is None:
                    break
                attr = _SID_ATTR.search(m.group(0))
                sid = attr.group(1) if attr else "?"
                line = line[m.end():]
                buffer = []
            close = line.find("</sentence>")
            if close < 0:
                buffer.append(line)
                line = ""
            else:
                buffer.append(line[:close])
                body = "".join(buffer).strip()
                yield EditedSentence(sid=sid, segments=_parse_body(body, sid))
                buffer = None
                line = line[close + len("</sentence>"):]
    if buffer is not None:
        raise MarkupError("unterminated sentence element", sid)


def _normalize(text: str) -> str:
    return " ".join(text.split())


def reconstruct_pair(es: EditedSentence):
    """Better-labeled pair from an edited sentence, or None when nothing
    actually changed (no edits, or delete+reinsert of identical text)."""
    if not es.has_edits:
        return None
    s1 = _normalize(es.original())
    s2 = _normalize(es.revised())
    if s1 == s2 or not s1 or not s2:
        return None
    return RevisionPair(id=f"aesw-{es.sid}", s1=s1, s2=s2, label=BETTER,
                        source="AESW", meta={"sid": es.sid})


def contains_placeholder(text: str, placeholder_tokens=DEFAULT_PLACEHOLDERS) -> bool:
    return any(tok in placeholder_tokens for tok in tokenize(text).tokens)


def eligible_pairs(pairs, cfg: SampleConfig):
    if cfg.mode == "Plaintext":
        return [p for p in pairs
                if not contains_placeholder(p.s1, cfg.placeholder_tokens)
                and not contains_placeholder(p.s2, cfg.placeholder_tokens)]
    return list(pairs)


def sample_pairs(pairs, cfg: SampleConfig):
    """Uniform sample without replacement over eligible pairs; deterministic
    for a fixed seed."""
    eligible = eligible_pairs(pairs, cfg)
    if cfg.n > len(eligible):
        raise CapacityError(
            f"requested {cfg.n} pairs but only {len(eligible)} are eligible")
    rng = random.Random(cfg.seed)
    return rng.sample(eligible, cfg.n)


def flip_mask(n: int, flip_prob: float, seed: int):
    rng = random.Random(seed)
    return [rng.random() < flip_prob for _ in range(n)]


def _swap(pair: RevisionPair, flipped: bool) -> RevisionPair:
    if not flipped:
        return pair
    label = NOT_BETTER if pair.label == BETTER else BETTER
    meta = dict(pair.meta)
    meta["flipped"] = "true"
    return RevisionPair(id=pair.id, s1=pair.s2, s2=pair.s1, label=label,
                        source=pair.source, meta=meta)


def flip_labels(pairs, flip_prob: float, seed: int):
    """Independently swap each Better pair with probability flip_prob,
    producing NotBetter examples. Deterministic for a fixed seed."""
    pairs = list(pairs)
    for p in pairs:
        if p.label != BETTER:
            raise ValueError(f"pair {p.id!r} is not labeled Better; "
                             "flipping an already-flipped set is meaningless")
    mask = flip_mask(len(pairs), flip_prob, seed)
    return [_swap(p, f) for p, f in zip(pairs, mask)]


def dev_split(pairs, fraction: float = 0.1, seed: int = 0):
    """Reserve a development portion (for hyperparameter tuning) before any
    sampling; returns (dev, rest), both deterministic for the seed."""
    pairs = list(pairs)
    rng = random.Random(seed)
    idx = list(range(len(pairs)))
    rng.shuffle(idx)
    n_dev = int(len(pairs) * fraction)
    dev_ids = set(idx[:n_dev])
    dev = [p for i, p in enumerate(pairs) if i in dev_ids]
    rest = [p for i, p in enumerate(pairs) if i not in dev_ids]
    return dev, rest


def export_pairs(pairs, fh):
    """Normalized line-delimited export: sid, s1, s2, label, flipped."""
    for p in pairs:
        fh.write(json.dumps({
            "sid": p.meta.get("sid", p.id),
            "s1": p.s1,
            "s2": p.s2,
            "label": p.label,
            "flipped": p.meta.get("flipped", "false") == "true",
        }, ensure_ascii=False) + "\n")


def load_exported(stream):
    out = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        meta = {"sid": obj["sid"]}
        if obj.get("flipped"):
            meta["flipped"] = "true"
        out.append(RevisionPair(id=f"aesw-{obj['sid']}", s1=obj["s1"], s2=obj["s2"],
                                label=obj["label"], source="AESW", meta=meta))
    return out
