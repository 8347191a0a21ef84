"""Annotated sentence-pair ingestion, label aggregation, and agreement stats.

Pair files are UTF-8 and line-delimited. Each record is either a JSON object
with fields id, s1, s2 and `labels` (7 strings, optional `comments`) or a
pre-aggregated `label` (single string); or a tab-separated row id/s1/s2/label
for quick fixtures. Records whose two sides are textually identical are
logged and skipped (the unit of interest is a modification), not fatal.
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from revjudge.errors import (
    PairParseError,
    PairSchemaError,
    RejectedRecordError,
    UndefinedKappaError,
)

log = logging.getLogger(__name__)

BETTER = "Better"
NOT_BETTER = "NotBetter"
LABELS = (BETTER, NOT_BETTER)

KAPPA_BANDS = (
    (0.0, "Poor"),
    (0.20, "Slight"),
    (0.40, "Fair"),
    (0.60, "Moderate"),
    (0.80, "Substantial"),
)


@dataclass
class RevisionPair:
    id: str
    s1: str
    s2: str
    label: str = None
    source: str = "ArgRewrite"
    meta: dict = field(default_factory=dict)


@dataclass
class AnnotationSet:
    pair_id: str
    labels: tuple
    comments: tuple = ()


@dataclass
class AgreementReport:
    n_items: int
    n_raters: int
    kappa: float
    band: str
    class_counts: dict


def _check_label(value, line_no):
    if value not in LABELS:
        raise PairSchemaError(f"line {line_no}: unknown label {value!r}")
    return value


def _record_from_json(obj, line_no):
    try:
        pid = str(obj["id"])
        s1 = obj["s1"]
        s2 = obj["s2"]
    except (KeyError, TypeError) as exc:
        raise PairParseError(f"record missing field: {exc}", line_no) from None
    pair = RevisionPair(id=pid, s1=s1, s2=s2,
                        source=obj.get("source", "ArgRewrite"),
                        meta=dict(obj.get("meta", {})))
    ann = None
    if "labels" in obj:
        labels = tuple(_check_label(v, line_no) for v in obj["labels"])
        if len(labels) % 2 == 0 or len(labels) == 0:
            raise PairSchemaError(
                f"line {line_no}: expected an odd label count, got {len(labels)}")
        comments = tuple(obj.get("comments", ()))
        ann = AnnotationSet(pair_id=pid, labels=labels, comments=comments)
    elif "label" in obj:
        pair.label = _check_label(obj["label"], line_no)
    return pair, ann


def parse_pairs(stream, strict_duplicates: bool = False):
    """Parse a pair file into (RevisionPair, AnnotationSet-or-None) entries.

    stream is an iterable of lines. Identical-text records are skipped with a
    warning unless strict_duplicates is set.
    """
    out = []
    for line_no, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("{"):
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PairParseError(f"invalid record: {exc.msg}", line_no) from None
            pair, ann = _record_from_json(obj, line_no)
        else:
            cols = line.split("\t")
            if len(cols) != 4:
                raise PairParseError(
                    f"expected 4 tab-separated columns, got {len(cols)}", line_no)
            pid, s1, s2, label = cols
            pair = RevisionPair(id=pid, s1=s1, s2=s2,
                                label=_check_label(label, line_no))
            ann = None
        if not pair.s1.strip() or not pair.s2.strip():
            raise PairParseError("empty sentence field", line_no)
        if pair.s1.strip() == pair.s2.strip():
            msg = f"line {line_no}: identical s1/s2 for pair {pair.id!r}, skipped"
            if strict_duplicates:
                raise RejectedRecordError(msg)
            log.warning(msg)
            continue
        out.append((pair, ann))
    return out


def serialize_pairs(entries, fh):
    """Inverse of parse_pairs for the JSON form (round-trip identity)."""
    for pair, ann in entries:
        obj = {"id": pair.id, "s1": pair.s1, "s2": pair.s2}
        if pair.source != "ArgRewrite":
            obj["source"] = pair.source
        if pair.meta:
            obj["meta"] = pair.meta
        if ann is not None:
            obj["labels"] = list(ann.labels)
            if ann.comments:
                obj["comments"] = list(ann.comments)
        elif pair.label is not None:
            obj["label"] = pair.label
        fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def majority_label(ann: AnnotationSet) -> str:
    """Label held by more than half the annotators (odd count, no ties)."""
    n_better = sum(1 for v in ann.labels if v == BETTER)
    return BETTER if n_better * 2 > len(ann.labels) else NOT_BETTER


def majority_size(ann: AnnotationSet) -> int:
    n_better = sum(1 for v in ann.labels if v == BETTER)
    return max(n_better, len(ann.labels) - n_better)


def filter_by_majority(entries, threshold: int):
    """Keep entries whose winning label has at least `threshold` votes."""
    if not entries:
        return []
    n_raters = len(entries[0][1].labels)
    if not (math.ceil(n_raters / 2) <= threshold <= n_raters):
        raise ValueError(
            f"threshold {threshold} outside [{math.ceil(n_raters / 2)}, {n_raters}]")
    return [e for e in entries if majority_size(e[1]) >= threshold]


def aggregate_labels(entries):
    """Stamp each pair with its majority label; returns the labeled pairs."""
    out = []
    for pair, ann in entries:
        if ann is None:
            if pair.label is None:
                raise ValueError(f"pair {pair.id!r} has neither labels nor a label")
        else:
            pair.label = majority_label(ann)
        out.append(pair)
    return out


def fleiss_kappa(ratings) -> float:
    """Fleiss's kappa for an item x category count matrix."""
    m = np.asarray(ratings, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 2:
        raise ValueError("need a 2-D matrix with at least 2 items")
    row_sums = m.sum(axis=1)
    n = row_sums[0]
    if n < 2 or not np.all(row_sums == n):
        raise ValueError("every item needs the same rater count (>= 2)")
    n_items = m.shape[0]
    p_cat = m.sum(axis=0) / (n_items * n)
    pe = float(np.sum(p_cat ** 2))
    if pe >= 1.0:
        raise UndefinedKappaError(
            "all ratings fall in a single category; kappa is undefined")
    p_items = (np.sum(m * m, axis=1) - n) / (n * (n - 1))
    pbar = float(np.mean(p_items))
    return (pbar - pe) / (1.0 - pe)


def kappa_band(kappa: float) -> str:
    for upper, name in KAPPA_BANDS:
        if kappa <= upper:
            return name
    return "AlmostPerfect"


def ratings_matrix(entries) -> np.ndarray:
    """Item x [Better, NotBetter] count matrix from annotation sets."""
    rows = []
    for _pair, ann in entries:
        nb = sum(1 for v in ann.labels if v == BETTER)
        rows.append((nb, len(ann.labels) - nb))
    return np.asarray(rows, dtype=np.int64)


def agreement_report(entries) -> AgreementReport:
    matrix = ratings_matrix(entries)
    kappa = fleiss_kappa(matrix)
    counts = class_distribution(aggregate_labels(entries))
    return AgreementReport(
        n_items=len(entries),
        n_raters=int(matrix[0].sum()),
        kappa=kappa,
        band=kappa_band(kappa),
        class_counts=counts,
    )


def class_distribution(items) -> dict:
    """Label -> count over labeled pairs."""
    counts = {}
    for pair in items:
        if pair.label is None:
            raise ValueError(f"pair {pair.id!r} is unlabeled")
        counts[pair.label] = counts.get(pair.label, 0) + 1
    return counts
