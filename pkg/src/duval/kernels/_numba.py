"""numba-compiled versions of the integer kernels (same signatures as _numpy)."""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def identity_index(t):
    n = t.shape[0]
    for e in range(n):
        ok = True
        for x in range(n):
            if t[e, x] != x or t[x, e] != x:
                ok = False
                break
        if ok:
            return e
    return -1


@njit(cache=True)
def is_latin(t):
    n = t.shape[0]
    seen = np.zeros(n, dtype=np.int64)
    stamp = 0
    for i in range(n):
        stamp += 1
        for j in range(n):
            x = t[i, j]
            if seen[x] == stamp:
                return False
            seen[x] = stamp
    for j in range(n):
        stamp += 1
        for i in range(n):
            x = t[i, j]
            if seen[x] == stamp:
                return False
            seen[x] = stamp
    return True


@njit(cache=True)
def element_orders(t, e):
    n = t.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for g in range(n):
        cur = g
        k = 1
        while cur != e and k <= n:
            cur = t[cur, g]
            k += 1
        out[g] = k
    return out


@njit(cache=True)
def inverses(t, e):
    n = t.shape[0]
    inv = np.zeros(n, dtype=np.int64)
    for g in range(n):
        for h in range(n):
            if t[g, h] == e:
                inv[g] = h
                break
    return inv


@njit(cache=True)
def derived_subgroup(t, e):
    n = t.shape[0]
    inv = inverses(t, e)
    mask = np.zeros(n, dtype=np.bool_)
    mask[e] = True
    for a in range(n):
        for b in range(n):
            c = t[t[t[a, b], inv[a]], inv[b]]
            mask[c] = True
    gens = np.nonzero(mask)[0]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            if mask[x]:
                for g in gens:
                    y = t[x, g]
                    if not mask[y]:
                        mask[y] = True
                        changed = True
    return mask


@njit(cache=True)
def _search(adj, cls, order, cap, out):
    n = adj.shape[0]
    perm = -np.ones(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    nxt = np.zeros(n + 1, dtype=np.int64)  # next candidate to try at each depth
    count = 0
    k = 0
    overflow = False
    while k >= 0:
        if k == n:
            if count >= cap:
                overflow = True
                break
            for i in range(n):
                out[count, i] = perm[i]
            count += 1
            k -= 1
            if k >= 0:
                v = order[k]
                used[perm[v]] = False
                perm[v] = -1
            continue
        v = order[k]
        placed = False
        w = nxt[k]
        while w < n:
            if not used[w] and cls[w] == cls[v]:
                ok = True
                for j in range(k):
                    u = order[j]
                    if adj[v, u] != adj[w, perm[u]]:
                        ok = False
                        break
                if ok:
                    perm[v] = w
                    used[w] = True
                    nxt[k] = w + 1
                    nxt[k + 1] = 0
                    k += 1
                    placed = True
                    break
            w += 1
        if not placed:
            nxt[k] = 0
            k -= 1
            if k >= 0:
                v = order[k]
                used[perm[v]] = False
                perm[v] = -1
    return count, overflow


def search_automorphisms(adj, cls, order, cap):
    n = len(adj)
    out = np.empty((cap, n), dtype=np.int64)
    count, overflow = _search(np.ascontiguousarray(adj, dtype=np.int64),
                              np.ascontiguousarray(cls, dtype=np.int64),
                              np.ascontiguousarray(order, dtype=np.int64), cap, out)
    return out[:count].copy(), bool(overflow)


@njit(cache=True)
def _heap(adj, colors, out, write):
    n = adj.shape[0]
    p = np.arange(n)
    c = np.zeros(n, dtype=np.int64)
    count = 0
    # check the initial permutation, then Heap's algorithm
    i = 0
    first = True
    while True:
        if first:
            first = False
        else:
            while i < n and c[i] >= i:
                c[i] = 0
                i += 1
            if i >= n:
                break
            if i % 2 == 0:
                tmp = p[0]
                p[0] = p[i]
                p[i] = tmp
            else:
                tmp = p[c[i]]
                p[c[i]] = p[i]
                p[i] = tmp
            c[i] += 1
            i = 1 if n > 1 else n
        ok = True
        for a in range(n):
            if colors[p[a]] != colors[a]:
                ok = False
                break
        if ok:
            for a in range(n):
                for b in range(a + 1, n):
                    if adj[p[a], p[b]] != adj[a, b]:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            if write:
                for a in range(n):
                    out[count, a] = p[a]
            count += 1
        if n <= 1:
            break
    return count


def brute_force_automorphisms(adj, colors):
    n = len(adj)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    adj = np.ascontiguousarray(adj, dtype=np.int64)
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    # first pass counts, second pass fills an exactly sized array
    count = _heap(adj, colors, np.empty((1, n), dtype=np.int64), False)
    out = np.empty((count, n), dtype=np.int64)
    _heap(adj, colors, out, True)
    return out


def warmup():
    t = np.array([[0, 1], [1, 0]], dtype=np.int64)
    identity_index(t)
    is_latin(t)
    element_orders(t, 0)
    derived_subgroup(t, 0)
    adj = np.array([[0, 1], [1, 0]], dtype=np.int64)
    col = np.array([0, 0], dtype=np.int64)
    search_automorphisms(adj, col, np.array([0, 1], dtype=np.int64), 4)
    brute_force_automorphisms(adj, col)
