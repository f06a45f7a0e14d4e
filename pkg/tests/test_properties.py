"""Randomised invariants for the arithmetic, substitution, projective and graph layers."""

import itertools
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from duval.coeffring import ZETA, CycNum, Scalar
from duval.dualgraph import ColoredGraph, brute_force_automorphisms, graph_automorphisms
from duval.poly import Poly, parse_poly
from duval.wps import GradedMap, compose_maps, projective_equal

FIELD_EXAMPLES = 1000
SUBS_EXAMPLES = 200

small = st.integers(-9, 9)
cycnums = st.builds(lambda a, b, c, d, den: CycNum((a, b, c, d), den),
                    small, small, small, small, st.integers(1, 5))
nonzero = cycnums.filter(lambda x: not x.is_zero())

# --- field axioms -----------------------------------------------------------


@settings(max_examples=FIELD_EXAMPLES)
@given(cycnums, cycnums, cycnums)
def test_field_axioms(a, b, c):
    zero, one = CycNum.rational(0), CycNum.rational(1)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a + (-a) == zero
    assert a - b == a + (-b)
    if not a.is_zero():
        assert a * a.inverse() == one
        assert (b / a) * a == b
    assert hash(a * b) == hash(b * a)


@settings(max_examples=200)
@given(nonzero, st.integers(-4, 4), st.integers(-4, 4))
def test_power_laws(a, m, n):
    assert a ** (m + n) == a ** m * a ** n
    assert (a ** m) ** n == a ** (m * n)


@settings(max_examples=200)
@given(cycnums, cycnums, st.integers(0, 11))
def test_galois_conjugation_is_a_field_map(a, b, k):
    if k % 2 == 0 or k % 3 == 0:
        return
    assert (a * b).conjugate(k) == a.conjugate(k) * b.conjugate(k)
    assert (a + b).conjugate(k) == a.conjugate(k) + b.conjugate(k)
    assert ZETA.conjugate(k) == ZETA ** k


@settings(max_examples=200)
@given(nonzero)
def test_norm_is_a_nonzero_rational(a):
    n = a.norm()
    assert isinstance(n, Fraction) and n != 0


# --- polynomials ------------------------------------------------------------

NV = 3
COORDS = ["x0", "x1", "x2"]


def _scalar(c, k):
    return Scalar.const(c) * Scalar.symbol("t", exp=k) if k else Scalar.const(c)


scalars = st.builds(_scalar, cycnums, st.integers(-2, 2))


def _polys(max_deg, max_terms):
    exps = st.tuples(*[st.integers(0, max_deg)] * NV).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(exps, scalars, max_size=max_terms).map(lambda d: Poly(d, NV))


polys = _polys(3, 4)
tuples = st.lists(_polys(2, 3), min_size=NV, max_size=NV)


@settings(max_examples=SUBS_EXAMPLES)
@given(polys, tuples, tuples)
def test_substitution_is_functorial(p, g, h):
    lhs = p.substitute(g).substitute(h)
    rhs = p.substitute([gi.substitute(h) for gi in g])
    assert lhs == rhs


@settings(max_examples=SUBS_EXAMPLES)
@given(polys, polys, tuples)
def test_substitution_is_a_ring_map(p, q, g):
    assert (p + q).substitute(g) == p.substitute(g) + q.substitute(g)
    assert (p * q).substitute(g) == p.substitute(g) * q.substitute(g)


@settings(max_examples=SUBS_EXAMPLES)
@given(polys)
def test_identity_substitutions(p):
    assert p.substitute(Poly.identity_images(NV)) == p
    assert p.subs_symbols({"t": Scalar.symbol("t")}) == p


@settings(max_examples=SUBS_EXAMPLES)
@given(polys)
def test_parse_print_round_trip(p):
    assert parse_poly(p.to_str(COORDS), COORDS, symbols={"t"}) == p


# --- projective equality ----------------------------------------------------

W = (1, 1, 2)


def _monomials(deg):
    return [e for e in itertools.product(range(deg + 1), repeat=len(W))
            if sum(a * w for a, w in zip(e, W)) == deg]


def _graded_images(draw):
    images = []
    for w in W:
        mons = _monomials(w)
        coeffs = draw(st.lists(st.sampled_from([-2, -1, 0, 1, 2]), min_size=len(mons), max_size=len(mons)))
        images.append(Poly({m: Scalar.const(c) for m, c in zip(mons, coeffs) if c}, len(W)))
    return images


@st.composite
def graded_maps(draw):
    images = _graded_images(draw)
    assume(all(not p.is_zero() for p in images))
    return GradedMap("f", W, images)


units = st.builds(lambda k, q: ZETA ** k * CycNum.rational(q), st.integers(0, 11),
                  st.sampled_from([1, -1, 2, Fraction(1, 3), -3]))


def rescale(f, c):
    return GradedMap("g", f.weights, [p.scale(Scalar.const(c ** w)) for p, w in zip(f.images, f.weights)])


@settings(max_examples=100)
@given(graded_maps(), units, units)
def test_projective_equal_is_an_equivalence(f, c, d):
    g = rescale(f, c)
    h = rescale(g, d)
    assert projective_equal(f, f)
    assert projective_equal(f, g) and projective_equal(g, f)
    assert projective_equal(g, h) and projective_equal(f, h)


@settings(max_examples=100)
@given(graded_maps(), graded_maps(), units)
def test_projective_equal_is_invariant_under_rescaling(f, g, c):
    assert projective_equal(f, g) == projective_equal(rescale(f, c), g)
    assert projective_equal(f, g) == projective_equal(g, f)


@settings(max_examples=100)
@given(graded_maps(), graded_maps(), units)
def test_composition_respects_projective_classes(f, g, c):
    fg = compose_maps(f, g)
    assume(all(not p.is_zero() for p in fg.images))
    assert projective_equal(fg, compose_maps(rescale(f, c), g))
    assert projective_equal(fg, compose_maps(f, rescale(g, c)))


# --- graph automorphisms ----------------------------------------------------


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 7))
    si = draw(st.lists(st.sampled_from([-1, -2]), min_size=n, max_size=n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    mult = draw(st.lists(st.sampled_from([1, 1, 1, 2]), min_size=len(chosen), max_size=len(chosen)))
    return ColoredGraph.build([(f"v{i}", s) for i, s in enumerate(si)],
                              [(f"v{a}", f"v{b}", m) for (a, b), m in zip(chosen, mult)])


@settings(max_examples=150)
@given(graphs())
def test_graph_automorphisms_form_a_group(g):
    auts = graph_automorphisms(g)
    group = set(auts)
    ident = tuple(range(g.n))
    assert ident in group
    adj, col = g.adjacency(), g.colors()
    for p in auts:
        assert all(col[p[v]] == col[v] for v in range(g.n))
        assert all(adj[p[a], p[b]] == adj[a, b] for a in range(g.n) for b in range(g.n))
        inv = tuple(sorted(range(g.n), key=lambda v: p[v]))
        assert inv in group
        for q in auts if len(auts) <= 120 else auts[::len(auts) // 24]:
            assert tuple(p[x] for x in q) in group
    assert auts == brute_force_automorphisms(g)
