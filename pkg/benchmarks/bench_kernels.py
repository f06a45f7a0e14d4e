"""Compare the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends get identical arrays; results are checked for equality before
any timing is reported.  numba is warmed up first so compile time is excluded.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from duval import grouptool
from duval.dualgraph import ColoredGraph, _search_order, refine_colors, load_graph
from duval.kernels import backend

ROOT = Path(__file__).resolve().parents[1]


def _tables():
    return {
        "Z/6": grouptool.cyclic(6),
        "D4": grouptool.dihedral(4),
        "order 16": grouptool.direct_product(grouptool.dihedral(4), grouptool.cyclic(2)),
        "order 48": grouptool.direct_product(grouptool.dihedral(12), grouptool.cyclic(2)),
    }


def _cycle(n):
    verts = [(f"v{i}", -2 if i % 2 else -1) for i in range(n)]
    edges = [(f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    return ColoredGraph.build(verts, edges)


def _graphs():
    out = {p.stem: load_graph(p) for p in sorted((ROOT / "graphs").glob("*.json"))}
    out["cycle-10"] = _cycle(10)
    return out


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    nb, npy = backend("numba"), backend("numpy")
    nb.warmup()

    rows = []
    for name, t in _tables().items():
        e = int(npy.identity_index(t))
        assert e == nb.identity_index(t)
        assert np.array_equal(npy.element_orders(t, e), nb.element_orders(t, e))
        assert np.array_equal(npy.derived_subgroup(t, e), nb.derived_subgroup(t, e))

        def work(k=None, t=t, e=e):
            k.is_latin(t)
            k.element_orders(t, e)
            k.derived_subgroup(t, e)

        rows.append((f"table {name}", _time(lambda: work(npy), args.repeat),
                     _time(lambda: work(nb), args.repeat)))

    for name, g in _graphs().items():
        adj, cls = g.adjacency(), refine_colors(g)
        order = _search_order(g, cls)
        a, _ = npy.search_automorphisms(adj, cls, order, 1 << 16)
        b, _ = nb.search_automorphisms(adj, cls, order, 1 << 16)
        assert sorted(map(tuple, a)) == sorted(map(tuple, b))
        rows.append((f"search {name}", _time(lambda: npy.search_automorphisms(adj, cls, order, 1 << 16),
                                             args.repeat),
                     _time(lambda: nb.search_automorphisms(adj, cls, order, 1 << 16), args.repeat)))
        if g.n <= 9:
            col = g.colors()
            assert sorted(map(tuple, npy.brute_force_automorphisms(adj, col))) == \
                sorted(map(tuple, nb.brute_force_automorphisms(adj, col)))
            rows.append((f"brute {name}", _time(lambda: npy.brute_force_automorphisms(adj, col), 1),
                         _time(lambda: nb.brute_force_automorphisms(adj, col), 1)))

    print(f"{'kernel':<24}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, a, b in rows:
        print(f"{name:<24}{a * 1e3:>12.3f}{b * 1e3:>12.3f}{a / b if b else float('inf'):>9.1f}x")


if __name__ == "__main__":
    main()
