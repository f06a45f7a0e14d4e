"""Finite groups: closure of map generators, Cayley tables, fingerprints, names.

Groups are handled concretely.  A closure is a list of ``GradedMap``
elements (identity first) together with an integer Cayley table; every
invariant is computed from that table by the integer kernels.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .coeffring import CycNum, Scalar, zeta_power
from .errors import ClosureExceedsCapError, DuvalError, NonClosedError
from .wps import (
    ADDITIVE,
    TORUS,
    GradedMap,
    Surface,
    compose_maps,
    identity_map,
    projective_equal,
)


# ---------------------------------------------------------------------------
# closure of graded maps


def _signature(m: GradedMap):
    return tuple(frozenset(p.terms) for p in m.images)


class _Index:
    """Lookup of maps up to projective equality, bucketed by support pattern."""

    def __init__(self):
        self.items: list[GradedMap] = []
        self.buckets: dict = {}

    def find(self, m: GradedMap):
        for k in self.buckets.get(_signature(m), ()):
            if projective_equal(self.items[k], m):
                return k
        return None

    def add(self, m: GradedMap) -> int:
        k = len(self.items)
        self.items.append(m)
        self.buckets.setdefault(_signature(m), []).append(k)
        return k


@dataclass
class Closure:
    elements: list
    table: np.ndarray
    generator_index: list

    @property
    def order(self) -> int:
        return len(self.elements)


def closure(S: Surface | None, gens: Sequence[GradedMap], cap: int = 64) -> Closure:
    """Breadth-first closure of ``gens`` under composition, modulo projective equality."""
    if S is not None:
        gens = [S.prepare(g) for g in gens]
        weights, rel = S.weights, S.rel
    else:
        weights, rel = gens[0].weights, gens[0].rel
    gens = [g.with_relation(rel) for g in gens]
    for g in gens:
        if g.free_symbols():
            raise DuvalError(f"generator {g.name} depends on free symbols {sorted(g.free_symbols())}")
    idx = _Index()
    idx.add(identity_map(weights, rel))
    gen_ids = []
    for g in gens:
        k = idx.find(g)
        if k is None:
            k = idx.add(g)
        gen_ids.append(k)
    # products e_i * g_j, breadth first
    right: dict = {}
    frontier = list(range(len(idx.items)))
    done = set()
    while frontier:
        nxt = []
        for i in frontier:
            if i in done:
                continue
            done.add(i)
            for gi, g in zip(gen_ids, gens):
                prod = compose_maps(idx.items[i], g)
                k = idx.find(prod)
                if k is None:
                    if len(idx.items) >= cap:
                        raise ClosureExceedsCapError(f"closure exceeds {cap} elements")
                    k = idx.add(prod)
                    nxt.append(k)
                right[(i, gi)] = k
        frontier = nxt
    n = len(idx.items)
    table = _table_from_right_mult(n, gen_ids, right)
    return Closure(list(idx.items), table, gen_ids)


def _table_from_right_mult(n, gen_ids, right) -> np.ndarray:
    """Full Cayley table from right multiplication by generators."""
    # express every element as a word in generators (BFS tree from identity)
    word = {0: []}
    order = [0]
    for i in order:
        for gi in gen_ids:
            k = right[(i, gi)]
            if k not in word:
                word[k] = word[i] + [gi]
                order.append(k)
    if len(word) != n:
        raise NonClosedError("closure is not connected through generator products")
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            cur = a
            for gi in word[b]:
                cur = right[(cur, gi)]
            table[a, b] = cur
    return table


# ---------------------------------------------------------------------------
# abstract groups from a multiplication rule


def table_from_rule(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> np.ndarray:
    elems = [identity]
    pos = {identity: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            h = mul(elems[i], g)
            if h not in pos:
                pos[h] = len(elems)
                elems.append(h)
        i += 1
    n = len(elems)
    t = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            t[a, b] = pos[mul(elems[a], elems[b])]
    return t


def perm_table(gens: Sequence[Sequence[int]]) -> np.ndarray:
    """Cayley table of the permutation group generated by ``gens``.

    Product convention: (p*q)(x) = p(q(x)), i.e. q applied first.
    """
    gens = [tuple(g) for g in gens]
    n = len(gens[0]) if gens else 0
    ident = tuple(range(n))
    return table_from_rule(gens, lambda p, q: tuple(p[q[x]] for x in range(n)), ident)


def cyclic(n: int) -> np.ndarray:
    a = np.arange(n)
    return ((a[:, None] + a[None, :]) % n).astype(np.int64)


def direct_product(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    n1, n2 = len(t1), len(t2)
    t = np.empty((n1 * n2, n1 * n2), dtype=np.int64)
    for a1, a2, b1, b2 in itertools.product(range(n1), range(n2), range(n1), range(n2)):
        t[a1 * n2 + a2, b1 * n2 + b2] = t1[a1, b1] * n2 + t2[a2, b2]
    return t


def dihedral(n: int) -> np.ndarray:
    """Symmetries of the regular n-gon (order 2n)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    if n == 2:
        return direct_product(cyclic(2), cyclic(2))
    return perm_table([rot, ref])


def metacyclic(m: int, n: int, r: int) -> np.ndarray:
    """Z/m semidirect Z/n with the generator of Z/n acting by x -> r*x."""
    if pow(r, n, m) != 1 % m:
        raise ValueError("r^n must be 1 modulo m")

    def mul(x, y):
        a, b = x
        c, d = y
        return ((a + pow(r, b, m) * c) % m, (b + d) % n)

    return table_from_rule([(1 % m, 0), (0, 1 % n)], mul, (0, 0))


def dicyclic(n: int) -> np.ndarray:
    """Order 4n: x^{2n} = 1, y^2 = x^n, y x y^-1 = x^-1."""
    m = 2 * n

    def mul(u, v):
        a, b = u
        c, d = v
        if b == 0:
            return ((a + c) % m, d)
        if d == 0:
            return ((a - c) % m, 1)
        return ((a - c + n) % m, 0)

    return table_from_rule([(1, 0), (0, 1)], mul, (0, 0))


def klein_by_z4() -> np.ndarray:
    """(Z/2)^2 semidirect Z/4, the Z/4 generator acting by (u, v) -> (u, u + v)."""

    def act(k, v):
        u, w = v
        for _ in range(k % 2):
            w = (u + w) % 2
        return (u, w)

    def mul(x, y):
        (v1, k1), (v2, k2) = x, y
        av = act(k1, v2)
        return (((v1[0] + av[0]) % 2, (v1[1] + av[1]) % 2), (k1 + k2) % 4)

    return table_from_rule([((1, 0), 0), ((0, 1), 0), ((0, 0), 1)], mul, ((0, 0), 0))


def pauli() -> np.ndarray:
    """Group generated by the Pauli matrices X, Z and i*Id (order 16)."""

    def mm(p, q):
        (a, b, c, d), (e, f, g, h) = p, q
        cm = lambda x, y: (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])
        ad = lambda x, y: (x[0] + y[0], x[1] + y[1])
        return (ad(cm(a, e), cm(b, g)), ad(cm(a, f), cm(b, h)),
                ad(cm(c, e), cm(d, g)), ad(cm(c, f), cm(d, h)))

    o, one, i = (0, 0), (1, 0), (0, 1)
    X = (o, one, one, o)
    Z = (one, o, o, (-1, 0))
    iI = (i, o, o, i)
    return table_from_rule([X, Z, iI], mm, (one, o, o, one))


def groups_of_order_16() -> dict:
    """Concrete constructions of the 14 groups of order 16."""
    z2, z4, z8 = cyclic(2), cyclic(4), cyclic(8)
    return {
        "Z/16": cyclic(16),
        "Z/4×Z/4": direct_product(z4, z4),
        "Z/2×Z/8": direct_product(z2, z8),
        "(Z/2)^2×Z/4": direct_product(direct_product(z2, z2), z4),
        "(Z/2)^4": direct_product(direct_product(z2, z2), direct_product(z2, z2)),
        "D8": dihedral(8),
        "SD16": metacyclic(8, 2, 3),
        "Q16": dicyclic(4),
        "M16": metacyclic(8, 2, 5),
        "Z/4⋊Z/4": metacyclic(4, 4, 3),
        "(Z/2)^2⋊Z/4": klein_by_z4(),
        "D4×Z/2": direct_product(dihedral(4), z2),
        "Q8×Z/2": direct_product(dicyclic(2), z2),
        "Pauli": pauli(),
    }


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    element_orders: tuple  # sorted ((order, count), ...)
    abelianization: tuple
    derived_order: int

    @property
    def exponent(self) -> int:
        from math import lcm

        out = 1
        for o, _ in self.element_orders:
            out = lcm(out, o)
        return out

    def element_order_dict(self) -> dict:
        return dict(self.element_orders)

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "elementOrders": {str(k): v for k, v in self.element_orders},
            "abelianization": list(self.abelianization),
            "derivedSubgroupOrder": self.derived_order,
        }


def check_table(table: np.ndarray) -> int:
    """Validate a Cayley table; return the identity index."""
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    if t.shape != (n, n) or (n and (t.min() < 0 or t.max() >= n)):
        raise NonClosedError("multiplication table is not closed")
    e = kernels.identity_index(t)
    if e < 0:
        raise NonClosedError("no identity element in table")
    if not kernels.is_latin(t):
        raise NonClosedError("table is not a group table (not a Latin square)")
    return e


def _abelian_invariants(t: np.ndarray, e: int, derived_mask: np.ndarray) -> tuple:
    """Invariant factors of G/G' from counts of elements of p-power order."""
    n = len(t)
    # coset index of each element
    coset = -np.ones(n, dtype=np.int64)
    reps = []
    members = np.nonzero(derived_mask)[0]
    for g in range(n):
        if coset[g] >= 0:
            continue
        c = len(reps)
        reps.append(g)
        for h in members:
            coset[t[g, h]] = c
    m = len(reps)
    if m == 1:
        return ()
    # order of each coset in the quotient
    qorders = []
    for g in reps:
        k, cur = 1, g
        while not derived_mask[cur]:
            cur = t[cur, g]
            k += 1
        qorders.append(k)
    factors = {}
    mm = m
    p = 2
    while mm > 1:
        if mm % p == 0:
            a = 0
            while mm % p == 0:
                mm //= p
                a += 1
            factors[p] = a
        p += 1
    parts_by_p = {p: _partition_from_counts(qorders, p, m) for p in factors}
    # assemble invariant factors d_1 | d_2 | ...
    cols = max(len(v) for v in parts_by_p.values())
    inv = []
    for j in range(cols):
        d = 1
        for p, parts in parts_by_p.items():
            padded = [0] * (cols - len(parts)) + parts
            d *= p ** padded[j]
        inv.append(d)
    return tuple(x for x in inv if x > 1)


def _ppart(o, p):
    out = 1
    while o % p == 0:
        o //= p
        out *= p
    return out


def _partition_from_counts(qorders, p, m):
    """Exponents e_1 <= e_2 <= ... of the Sylow p-part (abelian)."""
    # n_k = #{x : x^{p^k} = 1 in the p-part} = p^{sum_i min(k, e_i)}; the p-part
    # of an element's order is what matters, counted over the Sylow subgroup
    m_p = _ppart(m, p)
    # elements of the Sylow subgroup are those with order a power of p
    sylow = [o for o in qorders if _ppart(o, p) == o]
    if len(sylow) != m_p:
        raise NonClosedError("quotient by the derived subgroup is not abelian")
    logs = []
    k = 0
    while True:
        k += 1
        nk = sum(1 for o in sylow if o <= p ** k)
        lg = 0
        while p ** lg < nk:
            lg += 1
        logs.append(lg)
        if nk == m_p:
            break
    # logs[k-1] = sum_i min(k, e_i); number of e_i >= k is logs[k-1] - logs[k-2]
    ge = [logs[0]] + [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    exps = []
    for k in range(len(ge)):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        exps += [k + 1] * (ge[k] - nxt)
    return sorted(exps)


def fingerprint(elements, table: np.ndarray | None = None) -> GroupFingerprint:
    """Fingerprint of a finite group given by its Cayley table.

    ``elements`` may be a ``Closure`` (its table is used) or any list whose
    length matches ``table``.
    """
    if isinstance(elements, Closure):
        elements, table = elements.elements, elements.table
    t = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
    if len(elements) != len(t):
        raise NonClosedError("element list and table sizes differ")
    e = check_table(t)
    orders = kernels.element_orders(t, e)
    derived = kernels.derived_subgroup(t, e)
    ab = _abelian_invariants(t, e, derived)
    cnt = Counter(int(o) for o in orders)
    return GroupFingerprint(len(t), tuple(sorted(cnt.items())), ab, int(derived.sum()))


def fingerprint_table(table) -> GroupFingerprint:
    return fingerprint(list(range(len(table))), table)


@lru_cache(maxsize=1)
def named_groups() -> dict:
    z2, z3, z4 = cyclic(2), cyclic(3), cyclic(4)
    tables = {
        "trivial": cyclic(1),
        "Z/2": z2,
        "Z/3": z3,
        "Z/4": z4,
        "Z/6": cyclic(6),
        "(Z/2)^2": direct_product(z2, z2),
        "(Z/2)^3": direct_product(direct_product(z2, z2), z2),
        "D3": dihedral(3),
        "D4": dihedral(4),
        "D6": dihedral(6),
        "Z/2×Z/4": direct_product(z2, z4),
        "(Z/2)^2⋊Z/4": klein_by_z4(),
    }
    return {name: fingerprint_table(t) for name, t in tables.items()}


def named_collisions() -> list:
    """Pairs of table names sharing a fingerprint (expected empty)."""
    items = list(named_groups().items())
    return [(a, b) for (a, fa), (b, fb) in itertools.combinations(items, 2) if fa == fb]


def match_named_group(fp: GroupFingerprint):
    """Name from the table when exactly one entry matches; ``None`` otherwise."""
    hits = [name for name, f in named_groups().items() if f == fp]
    if len(hits) == 1:
        return hits[0]
    return None


# ---------------------------------------------------------------------------
# component groups


def aut0_members(family: Sequence[GradedMap], rel: bool, weights) -> list:
    """Finite sample of the identity component used for membership tests.

    Torus parameters run over the 12th roots of unity, additive parameters
    are set to 0.  Finite-order elements of a torus with coefficients in
    Q(zeta_12) are all of this form.
    """
    if not family:
        return [identity_map(weights, rel)]
    prod = family[0]
    for f in family[1:]:
        prod = compose_maps(prod, f)
    prod = prod.with_relation(rel)
    torus = [s for s, kind in prod.params if kind == TORUS]
    additive = [s for s, kind in prod.params if kind == ADDITIVE]
    roots = [Scalar.const(zeta_power(k), rel) for k in range(12)]
    zero = Scalar.const(0, rel)
    out = []
    for combo in itertools.product(roots, repeat=len(torus)):
        sub = dict(zip(torus, combo))
        sub.update({a: zero for a in additive})
        out.append(prod.subs(sub))
    return out


@dataclass
class ComponentGroup:
    closure: Closure
    kernel: list
    cosets: list
    table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.table)


def component_group(S: Surface | None, gens: Sequence[GradedMap], family: Sequence[GradedMap],
                    cap: int = 64) -> ComponentGroup:
    """Image of <gens> in Aut/Aut0: the closure modulo its intersection with Aut0."""
    cl = closure(S, gens, cap)
    rel = S.rel if S is not None else cl.elements[0].rel
    weights = cl.elements[0].weights
    fam = [S.prepare(f) if S is not None else f for f in family]
    sample = aut0_members(fam, rel, weights)
    kernel = [i for i, m in enumerate(cl.elements) if any(projective_equal(m, a) for a in sample)]
    if 0 not in kernel:
        kernel.insert(0, 0)
    t = cl.table
    n = cl.order
    coset = -np.ones(n, dtype=np.int64)
    reps = []
    for g in range(n):
        if coset[g] >= 0:
            continue
        c = len(reps)
        reps.append(g)
        for k in kernel:
            coset[t[g, k]] = c
    m = len(reps)
    q = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            q[a, b] = coset[t[reps[a], reps[b]]]
    # the kernel must be normal for this to be a group table
    for a in range(n):
        for b in range(n):
            if coset[t[a, b]] != q[coset[a], coset[b]]:
                raise NonClosedError("closure meets Aut0 in a non-normal subset")
    cosets = [[g for g in range(n) if coset[g] == c] for c in range(m)]
    return ComponentGroup(cl, kernel, cosets, q)


def has_central_involution(table: np.ndarray) -> bool:
    t = np.asarray(table)
    e = check_table(t)
    n = len(t)
    for g in range(n):
        if g != e and t[g, g] == e and all(t[g, h] == t[h, g] for h in range(n)):
            return True
    return False


def has_element_of_order(table: np.ndarray, k: int) -> bool:
    t = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
    e = check_table(t)
    return bool((kernels.element_orders(t, e) == k).any())


# ---------------------------------------------------------------------------
# lattice actions


def _mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), CycNum.rational(0)) for j in range(p)]
            for i in range(n)]


def _ident(n):
    return [[CycNum.rational(1 if i == j else 0) for j in range(n)] for i in range(n)]


def _det(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    total = CycNum.rational(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _to_exact(mat):
    out = []
    for row in mat:
        r = []
        for x in row:
            if isinstance(x, CycNum):
                r.append(x)
            elif isinstance(x, str):
                from .poly import parse_poly

                r.append(parse_poly(x, []).const_value().const_value())
            else:
                r.append(CycNum.rational(x))
        out.append(r)
    return out


@dataclass
class LatticeAction:
    """Named matrices acting on the parameters of a torus or vector group.

    ``kind`` is ``torus`` (integer matrices on the exponent lattice) or
    ``linear`` (linear part of an action on additive parameters).  For
    ``torus`` the matrix M encodes t_i -> prod_j t_j^{M[i][j]}.  With
    ``kinds`` given per symbol the action is ``mixed``: torus rows are read
    as exponents, additive rows as linear coefficients, and entries linking
    the two kinds must vanish.
    """

    name: str
    generators: dict
    relations: list = field(default_factory=list)  # [(word, word)], letters "g" or "g^-1"
    orders: dict = field(default_factory=dict)
    kind: str = TORUS
    symbols: tuple = ()
    kinds: tuple = ()

    def row_kind(self, i: int) -> str:
        if self.kinds:
            return self.kinds[i]
        return TORUS if self.kind == TORUS else ADDITIVE

    def matrix(self, g: str):
        return _to_exact(self.generators[g])

    def evaluate(self, word: Sequence[str]):
        n = len(next(iter(self.generators.values())))
        out = _ident(n)
        for letter in word:
            if letter in ("id", "1"):
                continue
            inv = letter.endswith("^-1")
            g = letter[:-3] if inv else letter
            m = self.matrix(g)
            if inv:
                m = _mat_inverse(m)
            out = _mat_mul(out, m)
        return out


def _mat_inverse(m):
    n = len(m)
    a = [row[:] + [CycNum.rational(1 if i == j else 0) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise DuvalError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matrix_order(m, cap: int = 64) -> int | None:
    n = len(m)
    ident = _ident(n)
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = _mat_mul(p, m)
    return None


def lattice_report(act: LatticeAction) -> dict:
    """Per-item results of a lattice-action check."""
    out = {"determinants": {}, "orders": {}, "relations": []}
    for g in act.generators:
        m = act.matrix(g)
        n = len(m)
        tor = [i for i in range(n) if act.row_kind(i) == TORUS]
        add = [i for i in range(n) if act.row_kind(i) != TORUS]
        block = lambda idx: [[m[i][j] for j in idx] for i in idx]
        d = _det(m)
        ok = len(m) == len(act.symbols) if act.symbols else True
        ok = ok and all(m[i][j].is_zero() for i in tor for j in add)
        ok = ok and all(m[i][j].is_zero() for i in add for j in tor)
        if tor:
            dt = _det(block(tor))
            ok = ok and dt in (CycNum.rational(1), CycNum.rational(-1))
            ok = ok and all(m[i][j].is_rational() and m[i][j].as_fraction().denominator == 1
                            for i in tor for j in tor)
        if add:
            ok = ok and not _det(block(add)).is_zero()
        out["determinants"][g] = (str(d), ok)
    for g, expected in act.orders.items():
        got = matrix_order(act.matrix(g))
        out["orders"][g] = (expected, got, got == expected)
    for lhs, rhs in act.relations:
        a, b = act.evaluate(lhs), act.evaluate(rhs)
        out["relations"].append((" ".join(lhs), " ".join(rhs) or "id", a == b))
    return out


def verify_lattice_action(act: LatticeAction) -> bool:
    r = lattice_report(act)
    return (all(ok for _, ok in r["determinants"].values())
            and all(ok for *_, ok in r["orders"].values())
            and all(ok for *_, ok in r["relations"]))


def substitution_from_matrix(act: LatticeAction, g: str, rel: bool = False) -> dict:
    """Parameter substitution realising generator ``g`` on the family symbols."""
    m = act.matrix(g)
    syms = list(act.symbols)
    out = {}
    for i, s in enumerate(syms):
        if act.row_kind(i) == TORUS:
            v = Scalar.const(1, rel)
            for j, s2 in enumerate(syms):
                if m[i][j].is_zero():
                    continue
                if not m[i][j].is_rational() or act.row_kind(j) != TORUS:
                    raise DuvalError("torus rows must be integral and involve torus symbols only")
                k = m[i][j].as_fraction()
                if k.denominator != 1:
                    raise DuvalError("torus matrices must be integral")
                v = v * Scalar.symbol(s2, rel, exp=int(k)) if k else v
        else:
            v = Scalar.const(0, rel)
            for j, s2 in enumerate(syms):
                if not m[i][j].is_zero():
                    if act.row_kind(j) == TORUS:
                        raise DuvalError("additive rows must not involve torus symbols")
                    v = v + Scalar.symbol(s2, rel) * Scalar.const(m[i][j], rel)
        out[s] = v
    return out


verifyLatticeAction = verify_lattice_action
matchNamedGroup = match_named_group
