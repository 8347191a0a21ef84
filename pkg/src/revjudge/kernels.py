"""Hot numeric kernels: numba-jitted fast path with a pure-numpy fallback.

The fallback is selected with REVJUDGE_KERNELS=numpy (or automatically when
numba is not importable); REVJUDGE_KERNELS=numba forces the jitted path and
fails loudly if numba is missing. Both variants of every kernel are exported
(`*_py` / `*_jit`) so tests can assert agreement and
benchmarks/bench_kernels.py can time them side by side.

Determinism notes:
  - tree growth and feature subsampling draw from a splitmix64 stream kept in
    uint64 scratch arrays (scalar uint64 arithmetic would warn on wrap);
  - split scoring aggregates class counts per distinct feature value, so the
    result does not depend on how argsort orders ties;
  - kernels built from +,-,*,/ are bit-identical across the two paths;
    mi_columns uses np.log, whose numba and numpy builds can disagree in the
    last ulp, so cross-path agreement there is to ~2 ulp (within one path the
    output is exactly reproducible).
"""

import os

import numpy as np

from .errors import ConfigurationError

_FORCE = os.environ.get("REVJUDGE_KERNELS", "").strip().lower()

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

if _FORCE == "numba" and not HAVE_NUMBA:
    raise ConfigurationError("REVJUDGE_KERNELS=numba but numba is not installed")

USE_NUMBA = HAVE_NUMBA and _FORCE != "numpy"


def kernel_path():
    """Name of the active kernel implementation, recorded in run manifests."""
    return "numba" if USE_NUMBA else "numpy"


def _jit(fn):
    if HAVE_NUMBA:
        return _njit(cache=True)(fn)
    return None


# ---------------------------------------------------------------------------
# Levenshtein distance over integer code arrays
# ---------------------------------------------------------------------------

def _lev_loop(a, b):
    # Two-row DP; insert/delete/substitute all cost 1.
    la = len(a)
    lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = np.arange(lb + 1, dtype=np.int64)
    cur = np.empty(lb + 1, dtype=np.int64)
    for i in range(1, la + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            best = prev[j] + 1
            t = cur[j - 1] + 1
            if t < best:
                best = t
            t = prev[j - 1] + (0 if b[j - 1] == ai else 1)
            if t < best:
                best = t
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[lb]


def _lev_rows(a, b):
    # Row-vectorized DP. The serial dependency cur[j] = min(m[j], cur[j-1]+1)
    # becomes a running minimum of (m[j] - j).
    la = len(a)
    lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = np.arange(lb + 1, dtype=np.int64)
    pos = np.arange(lb + 1, dtype=np.int64)
    head = np.empty(1, dtype=np.int64)
    for i in range(1, la + 1):
        cost = (b != a[i - 1]).astype(np.int64)
        m = np.minimum(prev[1:] + 1, prev[:-1] + cost)
        head[0] = i
        t = np.minimum.accumulate(np.concatenate((head, m - pos[1:])))
        prev = t + pos
    return int(prev[lb])


lev_distance_jit = _jit(_lev_loop)
lev_distance_py = _lev_rows
lev_distance = lev_distance_jit if USE_NUMBA else lev_distance_py


# ---------------------------------------------------------------------------
# Decision-tree growth (binary labels, Gini impurity)
# ---------------------------------------------------------------------------

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)


def _grow_tree(XT, y, sample_idx, seed, m_feats, max_depth, min_leaf, min_split):
    """Grow one CART tree and return its node table plus importance vector.

    XT is (n_features, n_rows) so per-feature slices are contiguous; y is 0/1
    int64 over rows; sample_idx is the bootstrap multiset for this tree.
    max_depth <= 0 means unrestricted. Node array layout: feature == -1 marks
    a leaf, leaf_p holds P(class 1).
    """
    n_features = XT.shape[0]
    n = len(sample_idx)
    max_nodes = 2 * n + 8

    feature = np.full(max_nodes, -1, dtype=np.int64)
    threshold = np.zeros(max_nodes, dtype=np.float64)
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    leaf_p = np.zeros(max_nodes, dtype=np.float64)
    n_node = np.zeros(max_nodes, dtype=np.int64)
    imp = np.zeros(n_features, dtype=np.float64)

    idx = sample_idx.copy()
    # stack rows: node id, start, end, depth
    stack = np.empty((max_nodes, 4), dtype=np.int64)
    state = np.empty(1, dtype=np.uint64)
    state[0] = np.uint64(seed)
    z = np.empty(1, dtype=np.uint64)
    feats = np.empty(m_feats, dtype=np.int64)

    node_count = 1
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    nf = float(n)

    while top >= 0:
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        top -= 1

        sub = idx[start:end]
        ys = y[sub]
        ns = end - start
        pos = int(np.sum(ys))
        n_node[node] = ns
        leaf_p[node] = pos / ns

        if pos == 0 or pos == ns or ns < min_split or (max_depth > 0 and depth >= max_depth):
            continue

        nsf = float(ns)
        pf = float(pos)
        fp = pf / nsf
        fq = (nsf - pf) / nsf
        h_parent = 1.0 - fp * fp - fq * fq

        # Floyd's sampling: m distinct feature indices from [0, n_features)
        for k in range(m_feats):
            i = n_features - m_feats + k
            state += _SM_GAMMA
            z[0] = state[0]
            z ^= z >> np.uint64(30)
            z *= _SM_M1
            z ^= z >> np.uint64(27)
            z *= _SM_M2
            z ^= z >> np.uint64(31)
            r = np.int64(z[0] >> np.uint64(11)) % (i + 1)
            dup = False
            for t in range(k):
                if feats[t] == r:
                    dup = True
                    break
            feats[k] = i if dup else r

        best_gain = 1e-12
        best_feat = -1
        best_thr = 0.0

        for k in range(m_feats):
            f = feats[k]
            v = XT[f][sub]
            order = np.argsort(v)
            vs = v[order]
            if vs[0] == vs[ns - 1]:
                continue
            yo = ys[order]
            cs = np.cumsum(yo)
            bnd = np.where(vs[:-1] < vs[1:])[0]
            nl = (bnd + 1).astype(np.float64)
            pl = cs[bnd].astype(np.float64)
            nr = nsf - nl
            pr = pf - pl
            rl = pl / nl
            rl2 = (nl - pl) / nl
            rr = pr / nr
            rr2 = (nr - pr) / nr
            hl = 1.0 - rl * rl - rl2 * rl2
            hr = 1.0 - rr * rr - rr2 * rr2
            gains = h_parent - (nl / nsf) * hl - (nr / nsf) * hr
            if min_leaf > 1:
                ok = (nl >= min_leaf) & (nr >= min_leaf)
                gains = np.where(ok, gains, -np.inf)
            b = int(np.argmax(gains))
            g = gains[b]
            if g > best_gain:
                best_gain = g
                best_feat = f
                lo = vs[bnd[b]]
                hi = vs[bnd[b] + 1]
                mid = 0.5 * (lo + hi)
                best_thr = lo if mid >= hi else mid

        if best_feat < 0:
            continue

        # stable partition by threshold; order inside halves follows sub order
        col = XT[best_feat]
        mask = col[sub] <= best_thr
        left_rows = sub[mask]
        right_rows = sub[~mask]
        nl_i = len(left_rows)
        idx[start:start + nl_i] = left_rows
        idx[start + nl_i:end] = right_rows

        imp[best_feat] += (nsf / nf) * best_gain

        feature[node] = best_feat
        threshold[node] = best_thr
        lc = node_count
        rc = node_count + 1
        node_count += 2
        left[node] = lc
        right[node] = rc

        top += 1
        stack[top, 0] = rc
        stack[top, 1] = start + nl_i
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = lc
        stack[top, 1] = start
        stack[top, 2] = start + nl_i
        stack[top, 3] = depth + 1

    return (
        feature[:node_count],
        threshold[:node_count],
        left[:node_count],
        right[:node_count],
        leaf_p[:node_count],
        n_node[:node_count],
        imp,
    )


grow_tree_jit = _jit(_grow_tree)
grow_tree_py = _grow_tree
grow_tree = grow_tree_jit if USE_NUMBA else grow_tree_py


def _predict_tree(feature, threshold, left, right, leaf_p, X):
    n = X.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = leaf_p[node]
    return out


predict_tree_jit = _jit(_predict_tree)
predict_tree_py = _predict_tree
predict_tree = predict_tree_jit if USE_NUMBA else predict_tree_py


# ---------------------------------------------------------------------------
# Mutual information of sparse columns with a binary label
# ---------------------------------------------------------------------------

def _mi_columns(indptr, indices, data, y, n_rows, n_pos, max_distinct, n_bins):
    """MI (nats) between each CSC column and the 0/1 label.

    Implicit zeros form their own bin. Columns with up to max_distinct
    distinct nonzero values keep one bin per value; wider columns are
    quantile-binned into at most n_bins bins.
    """
    n_cols = len(indptr) - 1
    out = np.zeros(n_cols, dtype=np.float64)
    n_neg = n_rows - n_pos
    nrf = float(n_rows)
    edges = np.empty(n_bins if n_bins > max_distinct else max_distinct, dtype=np.float64)
    cont = np.empty((edges.shape[0] + 1, 2), dtype=np.float64)

    for c in range(n_cols):
        s = indptr[c]
        e = indptr[c + 1]
        nnz = e - s
        if nnz == 0:
            continue
        sv = np.sort(data[s:e])
        d = 1
        for i in range(1, nnz):
            if sv[i] != sv[i - 1]:
                d += 1
        if d <= max_distinct:
            ne = 0
            edges[0] = sv[0]
            ne = 1
            for i in range(1, nnz):
                if sv[i] != sv[i - 1]:
                    edges[ne] = sv[i]
                    ne += 1
        else:
            ne = 0
            for k in range(n_bins):
                cand = sv[((k + 1) * nnz) // n_bins - 1]
                if ne == 0 or cand > edges[ne - 1]:
                    edges[ne] = cand
                    ne += 1
            if edges[ne - 1] < sv[nnz - 1]:
                edges[ne - 1] = sv[nnz - 1]

        for k in range(ne + 1):
            cont[k, 0] = 0.0
            cont[k, 1] = 0.0
        cont[0, 0] = float(n_neg)
        cont[0, 1] = float(n_pos)
        for i in range(s, e):
            k = int(np.searchsorted(edges[:ne], data[i])) + 1
            lab = y[indices[i]]
            cont[k, lab] += 1.0
            cont[0, lab] -= 1.0

        mi = 0.0
        for k in range(ne + 1):
            rk = cont[k, 0] + cont[k, 1]
            if rk <= 0.0:
                continue
            for j in range(2):
                njk = cont[k, j]
                if njk <= 0.0:
                    continue
                colj = float(n_neg) if j == 0 else float(n_pos)
                mi += (njk / nrf) * np.log((njk * nrf) / (rk * colj))
        out[c] = mi
    return out


mi_columns_jit = _jit(_mi_columns)
mi_columns_py = _mi_columns
mi_columns = mi_columns_jit if USE_NUMBA else mi_columns_py


# ---------------------------------------------------------------------------
# Pairwise squared Euclidean distances (SMOTE neighbor search)
# ---------------------------------------------------------------------------

def _sq_dists_loop(A):
    n = A.shape[0]
    m = A.shape[1]
    D = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(m):
                dk = A[i, k] - A[j, k]
                acc += dk * dk
            D[i, j] = acc
            D[j, i] = acc
    return D


def _sq_dists_numpy(A):
    diff = A[:, None, :] - A[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


pairwise_sq_dists_jit = _jit(_sq_dists_loop)
pairwise_sq_dists_py = _sq_dists_numpy
pairwise_sq_dists = pairwise_sq_dists_jit if USE_NUMBA else pairwise_sq_dists_py
