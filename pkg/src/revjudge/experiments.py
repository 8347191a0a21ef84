"""Cross-validated experiment orchestration.

Five training conditions share one stratified fold plan over the student
revision pairs; held-out folds are always student pairs, and proofreader
pairs only ever join the training side. Each condition reports per-fold
macro metrics, feature importances, and a reproducibility manifest.
"""

from __future__ import annotations

import hashlib
import io
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kernels
from .corpus import BETTER, NOT_BETTER, RevisionPair, serialize_pairs
from .errors import ProtocolError
from .learn import (
    TOP_K_DEFAULT,
    EvaluationResult,
    derive_seed,
    evaluate,
    fit_pipeline,
    majority_baseline,
    make_folds,
    significance_vs_baseline,
)
from .textmetrics import MetricsEngine, tokenize

log = logging.getLogger(__name__)

ARGREWRITE_ONLY = "ArgRewriteOnly"
AESW_ALL_ONLY = "AESWAllOnly"
AESW_PLAIN_ONLY = "AESWPlainOnly"
ARGREWRITE_PLUS_AESW_ALL = "ArgRewritePlusAESWAll"
ARGREWRITE_PLUS_AESW_PLAIN = "ArgRewritePlusAESWPlain"

CONDITIONS = (
    ARGREWRITE_ONLY,
    AESW_ALL_ONLY,
    AESW_PLAIN_ONLY,
    ARGREWRITE_PLUS_AESW_ALL,
    ARGREWRITE_PLUS_AESW_PLAIN,
)

_USES_ARGREWRITE = {
    ARGREWRITE_ONLY: True,
    AESW_ALL_ONLY: False,
    AESW_PLAIN_ONLY: False,
    ARGREWRITE_PLUS_AESW_ALL: True,
    ARGREWRITE_PLUS_AESW_PLAIN: True,
}
_AESW_POOL = {
    ARGREWRITE_ONLY: None,
    AESW_ALL_ONLY: "all",
    AESW_PLAIN_ONLY: "plain",
    ARGREWRITE_PLUS_AESW_ALL: "all",
    ARGREWRITE_PLUS_AESW_PLAIN: "plain",
}


@dataclass(frozen=True)
class ExperimentConfig:
    conditions: tuple[str, ...] = CONDITIONS
    k_folds: int = 10
    seed: int = 0
    min_df: int = 2
    top_k: int = TOP_K_DEFAULT
    n_trees: int = 500
    max_depth: int = 0
    min_leaf: int = 1
    smote_k: int = 5
    # oversampling fires once the majority share exceeds this
    imbalance_threshold: float = 0.55

    def __post_init__(self):
        for name in self.conditions:
            if name not in CONDITIONS:
                raise ValueError(f"unknown condition {name!r}")
        if not 0.5 <= self.imbalance_threshold < 1.0:
            raise ValueError("imbalance_threshold must be in [0.5, 1.0)")


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    y_true: tuple[str, ...]
    y_pred: tuple[str, ...]
    proba: tuple[float, ...]
    metrics: EvaluationResult
    importances: dict[str, float]
    smote_fired: bool
    n_synthetics: int
    schema_width: int
    selected_width: int
    train_class_counts: dict[str, int]


@dataclass(frozen=True)
class ConditionResult:
    name: str
    folds: tuple[FoldOutcome, ...]

    def fold_scores(self, metric: str = "macro_f1") -> list[float]:
        return [getattr(f.metrics, metric) for f in self.folds]

    def pooled_metrics(self) -> EvaluationResult:
        y_true = [lab for f in self.folds for lab in f.y_true]
        y_pred = [lab for f in self.folds for lab in f.y_pred]
        return evaluate(y_true, y_pred)


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    fold_plan: tuple[tuple[str, ...], ...]
    baseline: ConditionResult
    conditions: dict[str, ConditionResult]
    manifest: dict


def _dataset_hash(pairs: Sequence[RevisionPair]) -> str:
    buf = io.StringIO()
    serialize_pairs([(p, None) for p in pairs], buf)
    return hashlib.sha1(buf.getvalue().encode("utf-8")).hexdigest()[:16]


def _check_fold_plan(pairs: Sequence[RevisionPair],
                     fold_plan: Sequence[Sequence[str]]) -> None:
    planned = [pid for fold in fold_plan for pid in fold]
    if sorted(planned) != sorted(p.id for p in pairs):
        raise ProtocolError(
            "fold plan does not cover the evaluation pairs exactly")
    if len(set(planned)) != len(planned):
        raise ProtocolError("fold plan repeats pair ids")


def run_condition(name: str,
                  argrewrite: Sequence[RevisionPair],
                  aesw_pool: Sequence[RevisionPair],
                  fold_plan: Sequence[Sequence[str]],
                  config: ExperimentConfig,
                  engine: Optional[MetricsEngine] = None) -> ConditionResult:
    """Run one training condition against the shared fold plan.

    The held-out side of every fold is student pairs; proofreader pairs are
    training-only. Pure proofreader conditions ignore the student training
    split but still predict the same held-out folds.
    """
    if name not in CONDITIONS:
        raise ValueError(f"unknown condition {name!r}")
    _check_fold_plan(argrewrite, fold_plan)
    ar_ids = {p.id for p in argrewrite}
    collisions = ar_ids & {p.id for p in aesw_pool}
    if collisions:
        raise ProtocolError(
            f"proofreader pair ids collide with student ids: {sorted(collisions)[:3]}")
    if _AESW_POOL[name] is not None and not _USES_ARGREWRITE[name] and not aesw_pool:
        raise ValueError(f"condition {name} trains on proofreader pairs only, "
                         "but the pool is empty")
    engine = engine or MetricsEngine()
    by_id = {p.id: p for p in argrewrite}
    outcomes = []
    for f, fold_ids in enumerate(fold_plan):
        test = [by_id[pid] for pid in fold_ids]
        held = set(fold_ids)
        train_ar = [p for p in argrewrite if p.id not in held]
        material: list[RevisionPair] = []
        if _USES_ARGREWRITE[name]:
            material.extend(train_ar)
        if _AESW_POOL[name] is not None:
            material.extend(aesw_pool)
        # the sub-seed depends only on (run seed, fold) so two conditions
        # built from identical training material train identically
        bundle, report = fit_pipeline(
            material, min_df=config.min_df, top_k=config.top_k,
            n_trees=config.n_trees, max_depth=config.max_depth,
            min_leaf=config.min_leaf, smote_k=config.smote_k,
            imbalance_threshold=config.imbalance_threshold,
            seed=derive_seed(config.seed, f), engine=engine)
        y_pred, proba = bundle.predict_pairs(test, engine=engine)
        y_true = [p.label for p in test]
        names = bundle.schema.column_names()
        importances = {names[col]: float(bundle.forest.importances[pos])
                       for pos, col in enumerate(bundle.selection.indices)}
        outcomes.append(FoldOutcome(
            fold=f,
            train_ids=tuple(p.id for p in material),
            test_ids=tuple(fold_ids),
            y_true=tuple(y_true),
            y_pred=tuple(y_pred),
            proba=tuple(float(p) for p in proba),
            metrics=evaluate(y_true, y_pred),
            importances=importances,
            smote_fired=report.smote_fired,
            n_synthetics=report.n_synthetics,
            schema_width=report.schema_width,
            selected_width=report.selected_width,
            train_class_counts=report.class_counts,
        ))
        log.info("condition %s fold %d: macro F1 %.3f (train %d, smote %s)",
                 name, f, outcomes[-1].metrics.macro_f1, len(material),
                 report.n_synthetics if report.smote_fired else "off")
    return ConditionResult(name=name, folds=tuple(outcomes))


def _baseline_condition(argrewrite, fold_plan) -> ConditionResult:
    by_id = {p.id: p for p in argrewrite}
    outcomes = []
    for f, fold_ids in enumerate(fold_plan):
        held = set(fold_ids)
        train_labels = [p.label for p in argrewrite if p.id not in held]
        verdict = majority_baseline(train_labels)
        y_true = tuple(by_id[pid].label for pid in fold_ids)
        y_pred = tuple(verdict for _ in fold_ids)
        outcomes.append(FoldOutcome(
            fold=f,
            train_ids=tuple(p.id for p in argrewrite if p.id not in held),
            test_ids=tuple(fold_ids),
            y_true=y_true, y_pred=y_pred,
            proba=tuple(1.0 if v == BETTER else 0.0 for v in y_pred),
            metrics=evaluate(list(y_true), list(y_pred)),
            importances={}, smote_fired=False, n_synthetics=0,
            schema_width=0, selected_width=0,
            train_class_counts={
                BETTER: train_labels.count(BETTER),
                NOT_BETTER: train_labels.count(NOT_BETTER)},
        ))
    return ConditionResult(name="MajorityBaseline", folds=tuple(outcomes))


def _importance_means(cond: ConditionResult) -> list[tuple[str, float]]:
    names = sorted({n for fold in cond.folds for n in fold.importances})
    k = len(cond.folds)
    means = [(name, sum(fold.importances.get(name, 0.0) for fold in cond.folds) / k)
             for name in names]
    means.sort(key=lambda kv: (-kv[1], kv[0]))
    return means


def run_experiment(argrewrite: Sequence[RevisionPair],
                   aesw_all: Sequence[RevisionPair] = (),
                   aesw_plain: Sequence[RevisionPair] = (),
                   config: Optional[ExperimentConfig] = None,
                   engine: Optional[MetricsEngine] = None) -> ExperimentResult:
    """Run every configured condition against one shared fold plan and
    assemble the run manifest."""
    cfg = config or ExperimentConfig()
    if not argrewrite:
        raise ValueError("no evaluation pairs")
    for p in argrewrite:
        if p.label is None:
            raise ValueError(f"pair {p.id!r} is unlabeled")
    engine = engine or MetricsEngine()
    folds = make_folds(argrewrite, k=cfg.k_folds, seed=cfg.seed)
    fold_plan = tuple(tuple(argrewrite[i].id for i in fold) for fold in folds)
    baseline = _baseline_condition(argrewrite, fold_plan)
    pools = {"all": list(aesw_all), "plain": list(aesw_plain)}
    results: dict[str, ConditionResult] = {}
    for name in cfg.conditions:
        pool = pools[_AESW_POOL[name]] if _AESW_POOL[name] else []
        results[name] = run_condition(name, argrewrite, pool, fold_plan, cfg,
                                      engine=engine)
    manifest = {
        "config": {
            "conditions": list(cfg.conditions),
            "k_folds": cfg.k_folds,
            "seed": cfg.seed,
            "min_df": cfg.min_df,
            "top_k": cfg.top_k,
            "n_trees": cfg.n_trees,
            "max_depth": cfg.max_depth,
            "min_leaf": cfg.min_leaf,
            "smote_k": cfg.smote_k,
            "imbalance_threshold": cfg.imbalance_threshold,
        },
        "kernel_path": kernels.kernel_path(),
        "datasets": {
            "argrewrite": {"n": len(argrewrite), "hash": _dataset_hash(argrewrite)},
            "aesw_all": {"n": len(aesw_all), "hash": _dataset_hash(aesw_all)},
            "aesw_plain": {"n": len(aesw_plain), "hash": _dataset_hash(aesw_plain)},
        },
        "fold_sizes": [len(f) for f in fold_plan],
        "conditions": {
            name: [{
                "fold": o.fold,
                "n_train": len(o.train_ids),
                "n_test": len(o.test_ids),
                "train_class_counts": o.train_class_counts,
                "smote_fired": o.smote_fired,
                "n_synthetics": o.n_synthetics,
                "schema_width": o.schema_width,
                "selected_width": o.selected_width,
            } for o in res.folds]
            for name, res in results.items()
        },
        "top_features": {
            name: [{"name": n, "importance": v}
                   for n, v in _importance_means(res)[:20]]
            for name, res in results.items()
        },
    }
    for name, res in results.items():
        top5 = [n for n, _ in _importance_means(res)[:5]]
        if "token_len_diff" in top5:
            log.info("condition %s: token_len_diff ranks in the top 5 "
                     "importances, as expected for length-driven verdicts", name)
        else:
            log.warning("condition %s: token_len_diff is outside the top 5 "
                        "importances (top 5: %s)", name, top5)
    return ExperimentResult(config=cfg, fold_plan=fold_plan,
                            baseline=baseline, conditions=results,
                            manifest=manifest)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

_METRICS = ("macro_precision", "macro_recall", "macro_f1")


def _render_comparison(ordered_scores: list) -> str:
    """Markdown table from [(name, {metric: per-fold scores})] rows; the
    first row is the baseline every other row is starred against."""
    baseline_name, baseline_scores = ordered_scores[0]
    cells: dict[str, dict[str, tuple[float, bool]]] = {}
    for name, by_metric in ordered_scores:
        cells[name] = {}
        for metric in _METRICS:
            scores = by_metric[metric]
            mean = sum(scores) / len(scores)
            starred = False
            if name != baseline_name:
                sig = significance_vs_baseline(scores, baseline_scores[metric])
                starred = sig.p_value < 0.05
            cells[name][metric] = (mean, starred)
    best = {metric: max(cells[name][metric][0] for name, _ in ordered_scores)
            for metric in _METRICS}
    lines = ["| Condition | Macro P | Macro R | Macro F1 |",
             "| --- | --- | --- | --- |"]
    for name, _ in ordered_scores:
        parts = [name]
        for metric in _METRICS:
            mean, starred = cells[name][metric]
            text = f"{mean:.3f}"
            if starred:
                text += "*"
            if mean == best[metric]:
                text = f"**{text}**"
            parts.append(text)
        lines.append("| " + " | ".join(parts) + " |")
    lines.append("")
    lines.append("\\* differs from the majority baseline at p < 0.05 "
                 "(two-tailed paired t-test over folds)")
    return "\n".join(lines) + "\n"


def compare_conditions(result: ExperimentResult) -> str:
    """Markdown table of mean fold metrics per condition. A star marks a
    metric whose per-fold values differ from the baseline's at p < 0.05;
    the best value per column is bold."""
    rows = [(result.baseline.name, result.baseline)]
    rows += [(name, result.conditions[name]) for name in result.config.conditions
             if name in result.conditions]
    plans = {tuple(f.test_ids for f in cond.folds) for _, cond in rows}
    if len(plans) != 1:
        raise ProtocolError(
            "conditions were scored on different fold plans; "
            "paired comparison is meaningless")
    return _render_comparison(
        [(name, {m: cond.fold_scores(m) for m in _METRICS})
         for name, cond in rows])


def comparison_from_payload(payload: dict) -> str:
    """Re-render the comparison table from a persisted metrics payload, so a
    finished run can be reported without re-training anything."""
    def scores(block):
        return {m: [row[m] for row in block["per_fold"]] for m in _METRICS}

    rows = [("MajorityBaseline", scores(payload["baseline"]))]
    rows += [(name, scores(block))
             for name, block in payload["conditions"].items()]
    return _render_comparison(rows)


def feature_importance_report(result: ExperimentResult,
                              condition: str) -> list[tuple[str, float]]:
    """Mean forest importance per feature name across folds, descending.
    A feature missing from a fold's selection counts as 0 there."""
    return _importance_means(result.conditions[condition])


def length_diff_diagnostic(result: ExperimentResult, condition: str,
                           pairs: Sequence[RevisionPair]) -> dict[str, float]:
    """Mean token-count change (revision minus original) of held-out pairs,
    grouped by predicted label. A never-predicted label is absent."""
    cond = result.conditions[condition]
    lookup = {p.id: p for p in pairs}
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for fold in cond.folds:
        for pid, pred in zip(fold.test_ids, fold.y_pred):
            pair = lookup[pid]
            diff = len(tokenize(pair.s2)) - len(tokenize(pair.s1))
            sums[pred] = sums.get(pred, 0.0) + diff
            counts[pred] = counts.get(pred, 0) + 1
    return {lab: sums[lab] / counts[lab] for lab in sums}


def metrics_payload(result: ExperimentResult) -> dict:
    """Deterministic metrics structure for serialization: identical inputs
    and seeds yield byte-identical json."""
    def cond_block(cond: ConditionResult) -> dict:
        pooled = cond.pooled_metrics()
        return {
            "per_fold": [{
                "fold": o.fold,
                "macro_precision": o.metrics.macro_precision,
                "macro_recall": o.metrics.macro_recall,
                "macro_f1": o.metrics.macro_f1,
                "accuracy": o.metrics.accuracy,
            } for o in cond.folds],
            "mean": {m: sum(cond.fold_scores(m)) / len(cond.folds)
                     for m in _METRICS},
            "pooled": {
                "macro_precision": pooled.macro_precision,
                "macro_recall": pooled.macro_recall,
                "macro_f1": pooled.macro_f1,
                "accuracy": pooled.accuracy,
                "per_class": {
                    lab: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                    for lab, s in pooled.per_class.items()},
            },
        }

    payload = {"baseline": cond_block(result.baseline), "conditions": {}}
    for name in result.config.conditions:
        if name in result.conditions:
            payload["conditions"][name] = cond_block(result.conditions[name])
    return payload
