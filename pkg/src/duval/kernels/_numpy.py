"""Pure numpy / Python reference implementations of the integer kernels."""

from __future__ import annotations

import itertools
from math import factorial

import numpy as np

NAME = "numpy"


def identity_index(t: np.ndarray) -> int:
    n = len(t)
    ar = np.arange(n)
    hits = np.nonzero((t == ar[None, :]).all(axis=1) & (t == ar[:, None]).all(axis=0))[0]
    return int(hits[0]) if len(hits) else -1


def is_latin(t: np.ndarray) -> bool:
    n = len(t)
    if n == 0:
        return True
    s = np.sort(t, axis=1)
    c = np.sort(t, axis=0)
    ar = np.arange(n)
    return bool((s == ar[None, :]).all() and (c == ar[:, None]).all())


def element_orders(t: np.ndarray, e: int) -> np.ndarray:
    n = len(t)
    out = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    ar = np.arange(n)
    for k in range(1, n + 1):
        done = (cur == e) & (out == 0)
        out[done] = k
        if (out > 0).all():
            break
        cur = t[cur, ar]
    return out


def inverses(t: np.ndarray, e: int) -> np.ndarray:
    return np.argmax(t == e, axis=1).astype(np.int64)


def derived_subgroup(t: np.ndarray, e: int) -> np.ndarray:
    """Boolean mask of the subgroup generated by all commutators."""
    n = len(t)
    inv = inverses(t, e)
    ab = t[np.arange(n)[:, None], np.arange(n)[None, :]]
    abinv = t[ab, inv[:, None]]  # a*b*a^-1
    comm = t[abinv, inv[None, :]]  # a*b*a^-1*b^-1
    mask = np.zeros(n, dtype=np.bool_)
    mask[e] = True
    gens = np.unique(comm)
    mask[gens] = True
    while True:
        members = np.nonzero(mask)[0]
        prods = np.unique(t[members[:, None], gens[None, :]])
        new = mask.copy()
        new[prods] = True
        if (new == mask).all():
            return mask
        mask = new


# ---------------------------------------------------------------------------
# graphs


def search_automorphisms(adj: np.ndarray, cls: np.ndarray, order: np.ndarray, cap: int):
    """Backtracking over vertex images restricted to equal classes.

    Returns (perms, overflow), perms of shape (k, n).
    """
    n = len(adj)
    perm = -np.ones(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    found = []

    def extend(k):
        if len(found) > cap:
            return
        if k == n:
            found.append(perm.copy())
            return
        v = order[k]
        prev = order[:k]
        for w in range(n):
            if used[w] or cls[w] != cls[v]:
                continue
            if k and not np.array_equal(adj[v, prev], adj[w, perm[prev]]):
                continue
            perm[v] = w
            used[w] = True
            extend(k + 1)
            used[w] = False
            perm[v] = -1

    extend(0)
    overflow = len(found) > cap
    if overflow:
        found = found[:cap]
    if not found:
        return np.zeros((0, n), dtype=np.int64), overflow
    return np.array(found, dtype=np.int64), overflow


def brute_force_automorphisms(adj: np.ndarray, colors: np.ndarray, chunk: int = 50_000):
    n = len(adj)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    out = []
    it = itertools.permutations(range(n))
    remaining = factorial(n)
    while remaining:
        k = min(chunk, remaining)
        remaining -= k
        p = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, k)),
                        dtype=np.int64, count=k * n).reshape(k, n)
        ok = (colors[p] == colors[None, :]).all(axis=1)
        p = p[ok]
        if len(p):
            good = (adj[p[:, :, None], p[:, None, :]] == adj[None, :, :]).all(axis=(1, 2))
            out.append(p[good])
    return np.concatenate(out) if out else np.zeros((0, n), dtype=np.int64)
