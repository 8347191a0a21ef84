"""Model training and evaluation: stratified folds, minority oversampling,
mutual-information feature selection, a bagged decision-forest classifier,
and macro-averaged scoring with paired significance tests.

All stochastic steps take explicit seeds and are reproducible bit-for-bit
for a fixed kernel path (see kernels.kernel_path()).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.stats

from . import kernels
from .corpus import BETTER, LABELS, NOT_BETTER, RevisionPair
from .errors import (
    CannotOversampleError,
    ConfigurationError,
    DegenerateTrainingError,
)
from .features import (
    FeatureSchema,
    build_schema,
    dumps_schema,
    extract_matrix,
    loads_schema,
)

log = logging.getLogger(__name__)

MI_MAX_DISTINCT = 32   # columns with more distinct nonzeros get quantile bins
MI_QUANTILE_BINS = 16


# ---------------------------------------------------------------------------
# Cross-validation folds
# ---------------------------------------------------------------------------

def make_folds(dataset: Sequence[RevisionPair], k: int = 10, seed: int = 0,
               stratified: bool = True) -> list[list[int]]:
    """Partition dataset indices into k folds.

    Stratified mode deals each label's (shuffled) members round-robin with a
    rotating start offset, so fold sizes differ by at most one overall and
    within every class.
    """
    n = len(dataset)
    if k <= 1:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} items")
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    if stratified:
        by_label: dict[str, list[int]] = {}
        for i, pair in enumerate(dataset):
            if pair.label is None:
                raise ValueError(f"pair {pair.id} has no label; stratification needs one")
            by_label.setdefault(pair.label, []).append(i)
        offset = 0
        for label in sorted(by_label):
            members = by_label[label]
            rng.shuffle(members)
            for j, i in enumerate(members):
                folds[(j + offset) % k].append(i)
            offset = (offset + len(members)) % k
    else:
        order = list(range(n))
        rng.shuffle(order)
        for j, i in enumerate(order):
            folds[j % k].append(i)
    return [sorted(f) for f in folds]


# ---------------------------------------------------------------------------
# Synthetic minority oversampling
# ---------------------------------------------------------------------------

def smote(minority_vectors, target_count: int, k_neighbors: int = 5,
          seed: int = 0) -> np.ndarray:
    """Generate target_count synthetic rows by interpolating each drawn
    minority point toward one of its k nearest neighbors (squared euclidean).

    Every synthetic lies on the segment x + g * (nn - x) with g uniform in
    [0, 1), so the output never leaves the minority bounding box.
    """
    X = np.asarray(minority_vectors, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("minority_vectors must be 2-D")
    m = X.shape[0]
    if m < 2:
        raise CannotOversampleError(
            f"need at least 2 minority rows to oversample, got {m}")
    if target_count < 0:
        raise ValueError("target_count must be nonnegative")
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be positive")
    k = min(k_neighbors, m - 1)
    D = kernels.pairwise_sq_dists(np.ascontiguousarray(X))
    # stable argsort, then drop self so duplicate points cannot shadow it
    order = np.argsort(D, axis=1, kind="stable")
    nbrs = np.empty((m, k), dtype=np.int64)
    for i in range(m):
        row = order[i][order[i] != i]
        nbrs[i] = row[:k]
    rng = np.random.Generator(np.random.PCG64(seed))
    out = np.empty((target_count, X.shape[1]), dtype=np.float64)
    for t in range(target_count):
        i = int(rng.integers(m))
        j = int(nbrs[i, rng.integers(k)])
        g = rng.random()
        out[t] = X[i] + g * (X[j] - X[i])
    return out


# ---------------------------------------------------------------------------
# Feature selection by mutual information
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureSelection:
    """Columns kept after ranking, most informative first."""
    indices: tuple[int, ...]
    scores: tuple[float, ...]

    def reduce(self, X):
        if sp.issparse(X):
            return X.tocsr()[:, list(self.indices)]
        return np.asarray(X)[:, list(self.indices)]


def _binary_labels(labels: Sequence[str]) -> np.ndarray:
    y = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in LABELS:
            raise ValueError(f"unknown label {lab!r}")
        y[i] = 1 if lab == BETTER else 0
    return y


def select_features(train_vectors, train_labels: Sequence[str],
                    top_k: int) -> FeatureSelection:
    """Rank columns by mutual information with the label and keep the top_k.

    Ties break toward the lower column index. top_k larger than the matrix
    width is clamped with a warning.
    """
    if top_k < 1:
        raise ValueError("top_k must be positive")
    X = sp.csc_matrix(train_vectors)
    y = _binary_labels(train_labels)
    if X.shape[0] != len(y):
        raise ValueError("row count does not match label count")
    width = X.shape[1]
    if top_k > width:
        log.warning("top_k=%d exceeds width=%d; clamping", top_k, width)
        top_k = width
    mi = kernels.mi_columns(
        X.indptr.astype(np.int64), X.indices.astype(np.int64),
        X.data.astype(np.float64), y, X.shape[0], int(y.sum()),
        MI_MAX_DISTINCT, MI_QUANTILE_BINS)
    ranked = np.argsort(-mi, kind="stable")[:top_k]
    return FeatureSelection(indices=tuple(int(c) for c in ranked),
                            scores=tuple(float(mi[c]) for c in ranked))


# ---------------------------------------------------------------------------
# Bagged decision forest
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 500
    max_depth: int = 0      # 0 means unrestricted
    min_leaf: int = 1
    min_split: int = 2
    seed: int = 0
    bootstrap: bool = True  # False trains every tree on the full sample

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be positive")
        if self.min_leaf < 1 or self.min_split < 2:
            raise ValueError("min_leaf >= 1 and min_split >= 2 required")


@dataclass(frozen=True)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_p: np.ndarray


@dataclass(frozen=True)
class ForestModel:
    """Bagged CART ensemble over the fixed label pair.

    leaf_p and predict_proba are P(Better); importances are mean normalized
    impurity decreases and sum to 1.
    """
    config: ForestConfig
    trees: tuple[Tree, ...]
    n_features: int
    importances: np.ndarray
    classes: tuple[str, str] = (NOT_BETTER, BETTER)

    def predict_proba(self, X) -> np.ndarray:
        if sp.issparse(X):
            X = X.toarray()
        X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(
                f"expected (n, {self.n_features}) matrix, got {X.shape}")
        per_tree = np.empty((len(self.trees), X.shape[0]), dtype=np.float64)
        for t, tree in enumerate(self.trees):
            per_tree[t] = kernels.predict_tree(tree.feature, tree.threshold,
                                               tree.left, tree.right, tree.leaf_p, X)
        # summing sorted values makes the mean independent of tree order
        per_tree.sort(axis=0)
        return per_tree.sum(axis=0) / len(self.trees)

    def predict(self, X) -> list[str]:
        return [BETTER if p >= 0.5 else NOT_BETTER for p in self.predict_proba(X)]


def _densify(X) -> np.ndarray:
    if sp.issparse(X):
        X = X.toarray()
    return np.asarray(X, dtype=np.float64)


def train_forest(X, labels: Sequence[str],
                 config: Optional[ForestConfig] = None) -> ForestModel:
    """Fit a bagged Gini forest: bootstrap rows per tree, sqrt(width) feature
    subsample per split."""
    cfg = config or ForestConfig()
    Xd = _densify(X)
    y = _binary_labels(labels)
    if Xd.shape[0] != len(y):
        raise ValueError("row count does not match label count")
    if Xd.shape[0] == 0:
        raise ValueError("cannot train on an empty matrix")
    if len(set(labels)) < 2:
        raise DegenerateTrainingError(
            "training data contains a single class; cannot fit a classifier")
    n, width = Xd.shape
    XT = np.ascontiguousarray(Xd.T)
    m_feats = max(1, int(round(math.sqrt(width))))
    trees = []
    imp_total = np.zeros(width, dtype=np.float64)
    for t in range(cfg.n_trees):
        ss = np.random.SeedSequence([cfg.seed, t])
        gen = np.random.Generator(np.random.PCG64(ss))
        if cfg.bootstrap:
            sample_idx = gen.integers(0, n, size=n, dtype=np.int64)
        else:
            sample_idx = np.arange(n, dtype=np.int64)
        tree_seed = int(gen.integers(0, 2**62, dtype=np.int64))
        feature, threshold, left, right, leaf_p, _, imp = kernels.grow_tree(
            XT, y, sample_idx, tree_seed, m_feats,
            cfg.max_depth, cfg.min_leaf, cfg.min_split)
        trees.append(Tree(feature=feature, threshold=threshold, left=left,
                          right=right, leaf_p=leaf_p))
        s = imp.sum()
        if s > 0:
            imp_total += imp / s
    total = imp_total.sum()
    if total <= 0:
        # every bootstrap came out pure, which labels above already preclude
        raise DegenerateTrainingError("no split reduced impurity in any tree")
    importances = imp_total / total
    return ForestModel(config=cfg, trees=tuple(trees), n_features=width,
                       importances=importances)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvaluationResult:
    per_class: dict[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    n: int


def evaluate(y_true: Sequence[str], y_pred: Sequence[str]) -> EvaluationResult:
    """Per-class precision/recall/F1 over both labels plus their unweighted
    macro averages. A class never predicted scores precision 0."""
    if len(y_true) != len(y_pred):
        raise ValueError("y_true and y_pred lengths differ")
    if not y_true:
        raise ValueError("cannot evaluate an empty prediction set")
    for lab in list(y_true) + list(y_pred):
        if lab not in LABELS:
            raise ValueError(f"unknown label {lab!r}")
    per_class = {}
    for label in LABELS:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == label and p == label)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != label and p == label)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == label and p != label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassScores(precision, recall, f1)
    scores = list(per_class.values())
    acc = sum(1 for t, p in zip(y_true, y_pred) if t == p) / len(y_true)
    return EvaluationResult(
        per_class=per_class,
        macro_precision=sum(s.precision for s in scores) / len(scores),
        macro_recall=sum(s.recall for s in scores) / len(scores),
        macro_f1=sum(s.f1 for s in scores) / len(scores),
        accuracy=acc, n=len(y_true))


def majority_baseline(train_labels: Sequence[str]) -> str:
    """Label to predict for everything; ties resolve to Better."""
    if not train_labels:
        raise ValueError("empty training labels")
    n_better = sum(1 for lab in train_labels if lab == BETTER)
    return BETTER if 2 * n_better >= len(train_labels) else NOT_BETTER


@dataclass(frozen=True)
class SignificanceResult:
    p_value: float
    t_stat: float
    deltas: tuple[float, ...]

    @property
    def significant(self) -> bool:
        return self.p_value < 0.05


def significance_vs_baseline(scores_a: Sequence[float],
                             scores_b: Sequence[float]) -> SignificanceResult:
    """Two-tailed paired t-test over per-fold score deltas.

    All-zero deltas mean the systems are indistinguishable (p = 1.0);
    zero-variance nonzero deltas are maximally significant.
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired score vectors must be 1-D and equal length")
    if len(a) < 2:
        raise ValueError("need at least two folds for a paired test")
    d = a - b
    deltas = tuple(float(x) for x in d)
    var = d.var(ddof=1)
    mean = d.mean()
    if var == 0.0:
        p = 1.0 if mean == 0.0 else 0.0
        t = 0.0 if mean == 0.0 else math.copysign(math.inf, mean)
        return SignificanceResult(p_value=p, t_stat=t, deltas=deltas)
    t = mean / math.sqrt(var / len(d))
    p = float(2.0 * scipy.stats.t.sf(abs(t), len(d) - 1))
    return SignificanceResult(p_value=p, t_stat=float(t), deltas=deltas)


# ---------------------------------------------------------------------------
# Self-contained model bundle
# ---------------------------------------------------------------------------

BUNDLE_FORMAT = "revjudge-model-1"


@dataclass(frozen=True)
class ModelBundle:
    """Everything needed to score a raw sentence pair: the feature schema,
    the column selection, and the trained forest."""
    schema: FeatureSchema
    selection: FeatureSelection
    forest: ForestModel
    model_id: str = ""

    def __post_init__(self):
        if not self.model_id:
            object.__setattr__(self, "model_id", _bundle_id(self))

    def predict_pairs(self, pairs: Sequence[RevisionPair], engine=None):
        """Labels and P(Better) for raw pairs, via schema -> selection -> forest."""
        X = extract_matrix(pairs, self.schema, engine=engine)
        Xr = self.selection.reduce(X)
        proba = self.forest.predict_proba(Xr)
        labels = [BETTER if p >= 0.5 else NOT_BETTER for p in proba]
        return labels, proba

    def contributions(self, pair: RevisionPair, engine=None) -> list[dict]:
        """Selected features active on this pair, weighted by global forest
        importance, sorted most important first."""
        X = extract_matrix([pair], self.schema, engine=engine)
        row = self.selection.reduce(X).toarray().ravel()
        names = self.schema.column_names()
        out = []
        for pos, col in enumerate(self.selection.indices):
            if row[pos] != 0.0:
                out.append({
                    "name": names[col],
                    "value": float(row[pos]),
                    "importance": float(self.forest.importances[pos]),
                })
        out.sort(key=lambda d: (-d["importance"], d["name"]))
        return out


def _bundle_id(bundle: ModelBundle) -> str:
    h = hashlib.sha1()
    h.update(BUNDLE_FORMAT.encode())
    h.update(bundle.schema.version.encode())
    h.update(repr(bundle.selection.indices).encode())
    h.update(repr(bundle.forest.config).encode())
    for tree in bundle.forest.trees:
        for arr in (tree.feature, tree.threshold, tree.left, tree.right, tree.leaf_p):
            h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()[:16]


def save_model(bundle: ModelBundle, path) -> None:
    """Single-file npz: a json header plus the concatenated tree tables."""
    trees = bundle.forest.trees
    offsets = np.zeros(len(trees) + 1, dtype=np.int64)
    for i, tree in enumerate(trees):
        offsets[i + 1] = offsets[i] + len(tree.feature)
    header = json.dumps({
        "format": BUNDLE_FORMAT,
        "model_id": bundle.model_id,
        "schema": dumps_schema(bundle.schema),
        "selected": list(bundle.selection.indices),
        "mi_scores": list(bundle.selection.scores),
        "config": {
            "n_trees": bundle.forest.config.n_trees,
            "max_depth": bundle.forest.config.max_depth,
            "min_leaf": bundle.forest.config.min_leaf,
            "min_split": bundle.forest.config.min_split,
            "seed": bundle.forest.config.seed,
            "bootstrap": bundle.forest.config.bootstrap,
        },
        "n_features": bundle.forest.n_features,
        "classes": list(bundle.forest.classes),
    })
    with open(path, "wb") as fh:
        np.savez_compressed(
            fh,
            header=np.array(header),
            feature=np.concatenate([t.feature for t in trees]),
            threshold=np.concatenate([t.threshold for t in trees]),
            left=np.concatenate([t.left for t in trees]),
            right=np.concatenate([t.right for t in trees]),
            leaf_p=np.concatenate([t.leaf_p for t in trees]),
            tree_offsets=offsets,
            importances=bundle.forest.importances)


def load_model(path) -> ModelBundle:
    with np.load(path, allow_pickle=False) as z:
        header = json.loads(str(z["header"]))
        if header.get("format") != BUNDLE_FORMAT:
            raise ConfigurationError(
                f"unsupported model format {header.get('format')!r}")
        offsets = z["tree_offsets"]
        trees = []
        for i in range(len(offsets) - 1):
            lo, hi = int(offsets[i]), int(offsets[i + 1])
            trees.append(Tree(
                feature=z["feature"][lo:hi], threshold=z["threshold"][lo:hi],
                left=z["left"][lo:hi], right=z["right"][lo:hi],
                leaf_p=z["leaf_p"][lo:hi]))
        importances = z["importances"]
    schema = loads_schema(header["schema"])
    cfg = ForestConfig(**header["config"])
    forest = ForestModel(config=cfg, trees=tuple(trees),
                         n_features=int(header["n_features"]),
                         importances=importances,
                         classes=tuple(header["classes"]))
    selection = FeatureSelection(indices=tuple(header["selected"]),
                                 scores=tuple(header["mi_scores"]))
    bundle = ModelBundle(schema=schema, selection=selection, forest=forest,
                         model_id=header["model_id"])
    if _bundle_id(bundle) != header["model_id"]:
        raise ConfigurationError("model file fingerprint mismatch")
    return bundle


def predict_vectors(bundle: ModelBundle, vectors, schema_version: str):
    """Score already-extracted vectors; refuses vectors from another schema."""
    if schema_version != bundle.schema.version:
        raise ConfigurationError(
            "feature vectors were extracted under a different schema")
    Xr = bundle.selection.reduce(vectors)
    proba = bundle.forest.predict_proba(Xr)
    return [BETTER if p >= 0.5 else NOT_BETTER for p in proba], proba


# ---------------------------------------------------------------------------
# One-shot training pipeline
# ---------------------------------------------------------------------------

TOP_K_DEFAULT = 1000


@dataclass(frozen=True)
class FitReport:
    """What actually happened while fitting: realized sizes and whether the
    oversampler fired."""
    class_counts: dict[str, int]
    smote_fired: bool
    n_synthetics: int
    schema_width: int
    selected_width: int


def oversample_to_balance(Xr: np.ndarray, labels: list[str], threshold: float,
                          k_neighbors: int, seed: int):
    """Balance a training matrix when the class mix is further from even than
    the threshold allows. Returns (X, labels, fired, n_synthetics)."""
    counts = {lab: labels.count(lab) for lab in (BETTER, NOT_BETTER)}
    majority = max(counts, key=counts.get)
    minority = NOT_BETTER if majority == BETTER else BETTER
    share = counts[majority] / len(labels)
    if share <= threshold or counts[minority] == 0:
        return Xr, labels, False, 0
    need = counts[majority] - counts[minority]
    mask = [i for i, lab in enumerate(labels) if lab == minority]
    synth = smote(Xr[mask], need, k_neighbors=k_neighbors, seed=seed)
    return np.vstack([Xr, synth]), labels + [minority] * need, True, need


def derive_seed(*parts) -> int:
    """Stable sub-seed from arbitrary labels; hashing keeps streams for
    different pipeline stages independent."""
    digest = hashlib.sha1("/".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 62)


def fit_pipeline(pairs, *, min_df: int = 2, top_k: int = TOP_K_DEFAULT,
                 n_trees: int = 500, max_depth: int = 0, min_leaf: int = 1,
                 smote_k: int = 5, imbalance_threshold: float = 0.55,
                 seed: int = 0, engine=None):
    """Schema -> extraction -> MI selection -> oversampling -> forest, on one
    body of training material. Returns (ModelBundle, FitReport).

    Feature selection runs before oversampling so synthetic points never
    influence the ranking.
    """
    material = list(pairs)
    labels = [p.label for p in material]
    if any(lab is None for lab in labels):
        raise ValueError("every training pair needs a label")
    schema = build_schema(material, min_df=min_df, engine=engine)
    X = extract_matrix(material, schema, engine=engine)
    selection = select_features(X, labels, top_k=top_k)
    Xr = np.asarray(selection.reduce(X).toarray())
    Xb, labels_b, fired, n_synth = oversample_to_balance(
        Xr, list(labels), imbalance_threshold, smote_k,
        seed=derive_seed(seed, "smote"))
    forest = train_forest(Xb, labels_b, ForestConfig(
        n_trees=n_trees, max_depth=max_depth, min_leaf=min_leaf,
        seed=derive_seed(seed, "forest")))
    bundle = ModelBundle(schema=schema, selection=selection, forest=forest)
    report = FitReport(
        class_counts={lab: labels.count(lab) for lab in (BETTER, NOT_BETTER)},
        smote_fired=fired, n_synthetics=n_synth,
        schema_width=schema.width, selected_width=len(selection.indices))
    return bundle, report
