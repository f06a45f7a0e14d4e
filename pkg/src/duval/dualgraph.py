"""Dual graphs of negative curves and their automorphism groups.

Vertices carry a self-intersection (-1 or -2); edges carry a multiplicity.
Automorphisms are searched by backtracking over colour-refined classes;
a brute-force enumeration over all permutations serves as an oracle.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import GraphSizeError, NonClosedError, SchemaError
from .grouptool import fingerprint_table, match_named_group

MAX_VERTICES = 32
MAX_BRUTE_FORCE = 10
MAX_GROUP = 64
SEARCH_CAP = 1 << 16


@dataclass(frozen=True)
class ColoredGraph:
    ids: tuple
    si: tuple
    edges: tuple  # ((i, j, m), ...) with i < j, merged

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise SchemaError("vertex ids must be unique")
        if len(self.ids) != len(self.si):
            raise SchemaError("one self-intersection per vertex")
        for s in self.si:
            if s not in (-1, -2):
                raise SchemaError(f"self-intersection must be -1 or -2, got {s}")
        for i, j, m in self.edges:
            if i == j:
                raise SchemaError(f"loop at vertex {self.ids[i]}")
            if m < 1:
                raise SchemaError("edge multiplicity must be at least 1")

    @classmethod
    def build(cls, vertices, edges) -> "ColoredGraph":
        """``vertices``: [(id, si)]; ``edges``: [(a, b)] or [(a, b, m)] by id."""
        ids = tuple(str(v[0]) for v in vertices)
        si = tuple(int(v[1]) for v in vertices)
        pos = {v: k for k, v in enumerate(ids)}
        acc: Counter = Counter()
        for e in edges:
            a, b = str(e[0]), str(e[1])
            m = int(e[2]) if len(e) > 2 else 1
            if a not in pos or b not in pos:
                raise SchemaError(f"edge {a}-{b} mentions an unknown vertex")
            if a == b:
                raise SchemaError(f"loop at vertex {a}")
            if m < 1:
                raise SchemaError(f"edge {a}-{b} has multiplicity {m}")
            i, j = sorted((pos[a], pos[b]))
            acc[(i, j)] += m
        return cls(ids, si, tuple((i, j, m) for (i, j), m in sorted(acc.items())))

    @classmethod
    def from_json(cls, data: dict) -> "ColoredGraph":
        try:
            verts = [(v["id"], v["si"]) for v in data["vertices"]]
            edges = [(e["a"], e["b"], e.get("m", 1)) for e in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed graph file: missing {exc}") from None
        return cls.build(verts, edges)

    @classmethod
    def load(cls, path) -> "ColoredGraph":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": i, "si": s} for i, s in zip(self.ids, self.si)],
            "edges": [{"a": self.ids[i], "b": self.ids[j], "m": m} for i, j, m in self.edges],
        }

    @property
    def n(self) -> int:
        return len(self.ids)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j, m in self.edges:
            a[i, j] = a[j, i] = m
        return a

    def colors(self) -> np.ndarray:
        return np.array([-s for s in self.si], dtype=np.int64)

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)


def refine_colors(g: ColoredGraph) -> np.ndarray:
    """Stable colour refinement (1-WL); returns a class label per vertex.

    Starts from (self-intersection, degree) and splits by the multiset of
    (neighbour class, multiplicity) until stable.  Labels are canonical:
    they depend only on the refined signatures, not on vertex order.
    """
    adj = g.adjacency()
    n = g.n
    sig = [(g.si[v], int(adj[v].sum())) for v in range(n)]
    labels = _relabel(sig)
    while True:
        sig = [
            (labels[v], tuple(sorted((labels[u], int(adj[v, u])) for u in range(n) if adj[v, u])))
            for v in range(n)
        ]
        new = _relabel(sig)
        if len(set(new)) == len(set(labels)):
            return np.array(new, dtype=np.int64)
        labels = new


def _relabel(sig):
    keys = sorted(set(sig))
    pos = {k: i for i, k in enumerate(keys)}
    return [pos[s] for s in sig]


def _search_order(g: ColoredGraph, cls: np.ndarray) -> np.ndarray:
    """Vertex order for backtracking: small classes first, then stay connected."""
    adj = g.adjacency()
    size = Counter(cls.tolist())
    remaining = set(range(g.n))
    order = []
    while remaining:
        placed = set(order)
        best = min(
            remaining,
            key=lambda v: (-sum(1 for u in placed if adj[v, u]), size[int(cls[v])], int(cls[v]), g.ids[v]),
        )
        order.append(best)
        remaining.remove(best)
    return np.array(order, dtype=np.int64)


def graph_automorphisms(g: ColoredGraph) -> list:
    """All colour- and multiplicity-preserving permutations, sorted."""
    if g.n > MAX_VERTICES:
        raise GraphSizeError(f"graph has {g.n} vertices, limit is {MAX_VERTICES}")
    if g.n == 0:
        return [()]
    cls = refine_colors(g)
    order = _search_order(g, cls)
    perms, overflow = kernels.search_automorphisms(g.adjacency(), cls, order, SEARCH_CAP)
    if overflow:
        raise GraphSizeError(f"more than {SEARCH_CAP} automorphisms")
    return sorted(tuple(int(x) for x in p) for p in perms)


def brute_force_automorphisms(g: ColoredGraph) -> list:
    if g.n > MAX_BRUTE_FORCE:
        raise GraphSizeError(f"brute force limited to {MAX_BRUTE_FORCE} vertices, got {g.n}")
    if g.n == 0:
        return [()]
    perms = kernels.brute_force_automorphisms(g.adjacency(), g.colors())
    return sorted(tuple(int(x) for x in p) for p in perms)


def permutation_table(perms: list) -> np.ndarray:
    """Cayley table with (p*q)(x) = p(q(x))."""
    pos = {p: k for k, p in enumerate(perms)}
    n = len(perms)
    t = np.empty((n, n), dtype=np.int64)
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            r = tuple(p[x] for x in q)
            if r not in pos:
                raise NonClosedError("permutations are not closed under composition")
            t[a, b] = pos[r]
    return t


def graph_group_fingerprint(g: ColoredGraph, auts: list | None = None):
    auts = graph_automorphisms(g) if auts is None else auts
    if len(auts) > MAX_GROUP:
        raise GraphSizeError(f"automorphism group of order {len(auts)} exceeds {MAX_GROUP}")
    return fingerprint_table(permutation_table(auts))


def identify_graph_group(g: ColoredGraph):
    auts = graph_automorphisms(g)
    if len(auts) > MAX_GROUP:
        return None
    return match_named_group(graph_group_fingerprint(g, auts))


def _fixed(auts, v) -> bool:
    return all(p[v] == v for p in auts)


def find_invariant_claw(g: ColoredGraph, auts: list):
    """(center, (l1, l2, l3)) of fixed vertices with simple spokes and no edges among leaves."""
    adj = g.adjacency()
    fixed = [v for v in range(g.n) if _fixed(auts, v)]
    fset = set(fixed)
    for c in fixed:
        leaves = [u for u in range(g.n) if u in fset and u != c and adj[c, u] == 1]
        for trio in itertools.combinations(leaves, 3):
            if all(adj[a, b] == 0 for a, b in itertools.combinations(trio, 2)):
                return g.ids[c], tuple(g.ids[x] for x in trio)
    return None


def find_invariant_edge(g: ColoredGraph, auts: list):
    for i, j, m in g.edges:
        if m == 1 and _fixed(auts, i) and _fixed(auts, j):
            return g.ids[i], g.ids[j]
    return None


def orbits(g: ColoredGraph, auts: list) -> list:
    seen = set()
    out = []
    for v in range(g.n):
        if v in seen:
            continue
        orb = sorted({p[v] for p in auts})
        seen.update(orb)
        out.append([g.ids[x] for x in orb])
    return out


graphAutomorphisms = graph_automorphisms
bruteForceAutomorphisms = brute_force_automorphisms
identifyGraphGroup = identify_graph_group
findInvariantClaw = find_invariant_claw
findInvariantEdge = find_invariant_edge


def load_graph(path) -> ColoredGraph:
    return ColoredGraph.load(Path(path))
