"""Compiled CART growth loop.

Randomness (feature subsampling, random thresholds) comes from a splitmix64
stream seeded by the caller, so a tree is a pure function of its inputs.
"""

import numpy as np
from numba import njit

LEAF = -1
_GINI = 0
_ENTROPY = 1


@njit(cache=True)
def _next(state):
    state[0] = (state[0] + np.uint64(0x9E3779B97F4A7C15))
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(state):
    return (_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _below(state, n):
    return np.int64(_next(state) % np.uint64(n))


@njit(cache=True)
def _side_impurity(counts, crit):
    w = 0.0
    for c in range(counts.shape[0]):
        w += counts[c]
    if w <= 0.0:
        return 0.0
    if crit == _GINI:
        sq = 0.0
        for c in range(counts.shape[0]):
            sq += counts[c] * counts[c]
        return w - sq / w
    acc = 0.0
    for c in range(counts.shape[0]):
        if counts[c] > 0.0:
            acc += counts[c] * np.log2(counts[c])
    return w * np.log2(w) - acc


@njit(cache=True)
def grow(X, y, w, n_classes, crit, max_depth, min_leaf, max_features, random_split, seed):
    """Grow a tree; ``max_depth < 0`` means unbounded, ``max_features <= 0`` means all."""
    n, d = X.shape
    cap = 2 * n + 1
    feature = np.full(cap, LEAF, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, LEAF, dtype=np.int64)
    right = np.full(cap, LEAF, dtype=np.int64)
    value = np.zeros(cap, dtype=np.int64)
    samples = np.arange(n)
    scratch = np.empty(n, dtype=np.int64)
    state = np.zeros(1, dtype=np.uint64)
    state[0] = np.uint64(seed)

    totals = np.zeros(n_classes)
    lc = np.zeros(n_classes)
    rc = np.zeros(n_classes)
    vals = np.empty(n)
    cand = np.empty(d, dtype=np.int64)

    # stack entries: node, start, end, depth
    stack = np.empty((cap, 4), dtype=np.int64)
    totals[:] = 0.0
    for i in range(n):
        totals[y[i]] += w[i]
    value[0] = np.argmax(totals)
    n_nodes = 1
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        m = end - start
        if max_depth >= 0 and depth >= max_depth:
            continue
        if m < 2 * min_leaf:
            continue
        totals[:] = 0.0
        for i in range(start, end):
            totals[y[samples[i]]] += w[samples[i]]
        nz = 0
        for c in range(n_classes):
            if totals[c] > 0.0:
                nz += 1
        if nz <= 1:
            continue
        n_cand = 0
        for f in range(d):
            lo = X[samples[start], f]
            hi = lo
            for i in range(start + 1, end):
                v = X[samples[i], f]
                if v < lo:
                    lo = v
                if v > hi:
                    hi = v
            if hi > lo:
                cand[n_cand] = f
                n_cand += 1
        if n_cand == 0:
            continue
        if 0 < max_features < n_cand:
            for k in range(max_features):
                j = k + _below(state, n_cand - k)
                tmp = cand[k]
                cand[k] = cand[j]
                cand[j] = tmp
            cand[:max_features] = np.sort(cand[:max_features])
            n_cand = max_features

        best_imp = np.inf
        best_f = -1
        best_t = 0.0
        for ci in range(n_cand):
            f = cand[ci]
            if random_split:
                lo = X[samples[start], f]
                hi = lo
                for i in range(start + 1, end):
                    v = X[samples[i], f]
                    if v < lo:
                        lo = v
                    if v > hi:
                        hi = v
                t = lo + _uniform(state) * (hi - lo)
                lc[:] = 0.0
                nl = 0
                for i in range(start, end):
                    s = samples[i]
                    if X[s, f] <= t:
                        lc[y[s]] += w[s]
                        nl += 1
                if nl < min_leaf or m - nl < min_leaf:
                    continue
                for c in range(n_classes):
                    rc[c] = totals[c] - lc[c]
                imp = _side_impurity(lc, crit) + _side_impurity(rc, crit)
                if imp < best_imp:
                    best_imp = imp
                    best_f = f
                    best_t = t
                continue
            for i in range(m):
                vals[i] = X[samples[start + i], f]
            order = np.argsort(vals[:m], kind="mergesort")
            lc[:] = 0.0
            for p in range(m - 1):
                s = samples[start + order[p]]
                lc[y[s]] += w[s]
                lo = vals[order[p]]
                hi = vals[order[p + 1]]
                if not lo < hi:
                    continue
                if p + 1 < min_leaf or m - p - 1 < min_leaf:
                    continue
                for c in range(n_classes):
                    rc[c] = totals[c] - lc[c]
                imp = _side_impurity(lc, crit) + _side_impurity(rc, crit)
                if imp < best_imp:
                    best_imp = imp
                    best_f = f
                    t = (lo + hi) / 2.0
                    if not (lo <= t and t < hi):
                        t = lo
                    best_t = t
        if best_f < 0:
            continue

        # stable partition of samples[start:end]
        nl = 0
        for i in range(start, end):
            if X[samples[i], best_f] <= best_t:
                scratch[nl] = samples[i]
                nl += 1
        k = nl
        for i in range(start, end):
            if not X[samples[i], best_f] <= best_t:
                scratch[k] = samples[i]
                k += 1
        for i in range(m):
            samples[start + i] = scratch[i]

        li = n_nodes
        ri = n_nodes + 1
        n_nodes += 2
        for child, cs, ce in ((li, start, start + nl), (ri, start + nl, end)):
            lc[:] = 0.0
            for i in range(cs, ce):
                lc[y[samples[i]]] += w[samples[i]]
            value[child] = np.argmax(lc)
        feature[node] = best_f
        threshold[node] = best_t
        left[node] = li
        right[node] = ri
        stack[top, 0] = ri
        stack[top, 1] = start + nl
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = li
        stack[top, 1] = start
        stack[top, 2] = start + nl
        stack[top, 3] = depth + 1
        top += 1
    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy())


@njit(cache=True)
def apply(feature, threshold, left, right, value, X):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        k = 0
        while feature[k] != LEAF:
            if X[i, feature[k]] <= threshold[k]:
                k = left[k]
            else:
                k = right[k]
        out[i] = value[k]
    return out
