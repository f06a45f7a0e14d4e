"""Graded self-maps of weighted projective spaces and the checks built on them.

A map is a tuple of images, coordinate i going to a polynomial that is
quasi-homogeneous of weight w_i.  Two tuples define the same map of
P(w) exactly when they differ by the weighted scalar action
x_i -> s^{w_i} x_i for some s in k*.  Composition ``compose(f, g)`` applies
``g`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .coeffring import LAMBDA, Scalar
from .errors import (
    DimensionError,
    DuvalError,
    GradednessError,
    NotAnAutomorphismError,
    OrderExceedsCapError,
)
from .poly import ZERO_DEGREE, Poly, display_coord_name, parse_poly, proportionality_scalar

GENERIC = "generic"
SIXTH = "sixth"

TORUS = "torus"
ADDITIVE = "additive"


def normalize_mode(mode):
    """Accepts 'generic', 'sixth'/'sixth-root', or a rational (str/int/Fraction)."""
    if mode is None or mode == GENERIC:
        return GENERIC
    if mode in (SIXTH, "sixth-root", "sixthRoot"):
        return SIXTH
    if isinstance(mode, str):
        if "." in mode or "e" in mode.lower():
            raise ValueError(f"lambda must be an exact rational p/q, got {mode!r}")
        return Fraction(mode)
    return Fraction(mode)


def mode_label(mode) -> str:
    mode = normalize_mode(mode)
    if mode == GENERIC:
        return "generic"
    if mode == SIXTH:
        return "sixth-root"
    return str(mode)


def _scalar_mode(mode):
    mode = normalize_mode(mode)
    if mode == GENERIC:
        return None
    return mode


@dataclass(frozen=True)
class GradedMap:
    name: str
    weights: tuple
    images: tuple
    params: tuple = ()  # ((symbol, TORUS | ADDITIVE), ...)
    declared_inverse: "GradedMap | None" = field(default=None, compare=False, repr=False)
    inverse_recipe: str | None = field(default=None, compare=False)
    coords: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "images", tuple(self.images))
        object.__setattr__(self, "params", tuple(tuple(p) for p in self.params))
        if len(self.images) != len(self.weights):
            raise DimensionError(
                f"map {self.name}: {len(self.images)} images for {len(self.weights)} coordinates"
            )
        check_graded(self.name, self.weights, self.images, self.coords)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def rel(self) -> bool:
        return self.images[0].rel

    @property
    def param_symbols(self) -> tuple:
        return tuple(p for p, _ in self.params)

    @property
    def param_symbol(self):
        return self.params[0][0] if self.params else None

    def free_symbols(self) -> set:
        out = set()
        for p in self.images:
            out |= p.symbols()
        out.discard(LAMBDA)
        return out

    def renamed(self, name: str) -> "GradedMap":
        return GradedMap(name, self.weights, self.images, self.params,
                         self.declared_inverse, self.inverse_recipe, self.coords)

    def with_inverse(self, inv: "GradedMap | None", recipe: str | None = None) -> "GradedMap":
        return GradedMap(self.name, self.weights, self.images, self.params, inv, recipe, self.coords)

    def subs(self, mapping: Mapping[str, object], name: str | None = None) -> "GradedMap":
        """Substitute values for family parameters (Scalars or numbers)."""
        rel = self.rel
        vals = {k: Scalar.coerce(v, rel) if not isinstance(v, Scalar) else v.with_relation(rel)
                for k, v in mapping.items()}
        images = [p.subs_symbols(vals) for p in self.images]
        remaining = set()
        for p in images:
            remaining |= p.symbols()
        params = tuple((s, kind) for s, kind in self.params if s in remaining)
        inv = self.declared_inverse.subs(mapping) if self.declared_inverse is not None else None
        return GradedMap(name or self.name, self.weights, images, params, inv,
                         self.inverse_recipe, self.coords)

    def specialize(self, mode) -> "GradedMap":
        smode = _scalar_mode(mode)
        if smode is None:
            return self
        images = [p.specialize(smode) for p in self.images]
        inv = self.declared_inverse.specialize(mode) if self.declared_inverse is not None else None
        return GradedMap(self.name, self.weights, images, self.params, inv,
                         self.inverse_recipe, self.coords)

    def with_relation(self, rel: bool) -> "GradedMap":
        if rel == self.rel:
            return self
        images = [p.with_relation(rel) for p in self.images]
        inv = self.declared_inverse.with_relation(rel) if self.declared_inverse is not None else None
        return GradedMap(self.name, self.weights, images, self.params, inv,
                         self.inverse_recipe, self.coords)

    def to_str(self) -> str:
        coords = self.coords or [f"x{i}" for i in range(self.nvars)]
        shown = [display_coord_name(c) for c in coords]
        return "(" + " : ".join(p.to_str(shown) for p in self.images) + ")"

    def __str__(self):
        return f"{self.name}: {self.to_str()}"


def check_graded(name, weights, images, coords=None):
    if not any(not p.is_zero() for p in images):
        raise GradednessError(f"map {name}: all images are zero")
    for i, (p, w) in enumerate(zip(images, weights)):
        d = p.weighted_degree(weights)
        if d is ZERO_DEGREE:
            continue
        if d != w:
            cname = coords[i] if coords else f"x{i}"
            got = "mixed" if d is None else d
            raise GradednessError(
                f"map {name}: image of coordinate {cname} has weighted degree {got}, expected {w}"
            )


def identity_map(weights: Sequence[int], rel: bool = False, coords=None) -> GradedMap:
    n = len(weights)
    return GradedMap("id", tuple(weights), Poly.identity_images(n, rel), coords=coords)


def map_from_strings(name, weights, coords, images, params=(), rel=False, symbols=None) -> GradedMap:
    polys = [parse_poly(s, coords, symbols=symbols, rel=rel) for s in images]
    return GradedMap(name, tuple(weights), polys, params, coords=tuple(coords))


def map_from_matrix(name, matrix, coords, params=(), rel=False, symbols=None) -> GradedMap:
    """Linear map of P^n: row i lists the coefficients of the image of coordinate i."""
    n = len(coords)
    if len(matrix) != n or any(len(r) != n for r in matrix):
        raise DimensionError(f"map {name}: matrix must be {n}x{n}")
    images = []
    for row in matrix:
        img = Poly.zero(n, rel)
        for j, entry in enumerate(row):
            c = parse_poly(str(entry), coords, symbols=symbols, rel=rel)
            if not c.is_const():
                raise GradednessError(f"map {name}: matrix entry {entry!r} involves coordinates")
            img = img + Poly.var(j, n, rel).scale(c.const_value())
        images.append(img)
    return GradedMap(name, (1,) * n, images, params, coords=tuple(coords))


def _align(f: GradedMap, g: GradedMap):
    if f.weights != g.weights:
        raise DimensionError(f"weights differ: {f.weights} vs {g.weights}")
    if f.rel != g.rel:
        rel = f.rel or g.rel
        f, g = f.with_relation(rel), g.with_relation(rel)
    return f, g


def compose_maps(f: GradedMap, g: GradedMap, name: str | None = None) -> GradedMap:
    """f after g."""
    f, g = _align(f, g)
    images = [p.substitute(g.images) for p in f.images]
    params = list(g.params)
    for p in f.params:
        if p not in params:
            params.append(p)
    return GradedMap(name or f"{f.name}*{g.name}", f.weights, images, tuple(params), coords=f.coords)


# ---------------------------------------------------------------------------
# projective equality


def _bezout(values):
    """Integers k with sum k_i v_i = gcd(values)."""
    ks = [0] * len(values)
    if not values:
        return 0, ks
    g = values[0]
    ks[0] = 1
    for idx in range(1, len(values)):
        v = values[idx]
        # extended Euclid on (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        ks = [k * old_s for k in ks]
        ks[idx] = old_t
        g = old_r
    return g, ks


def coordinate_ratio(fi: Poly, gi: Poly):
    """Pair (n, d) of unit Scalars with d*fi == n*gi, or None."""
    if set(fi.terms) != set(gi.terms):
        return None
    fallback = None
    for e in gi.support():
        d = gi.terms[e]
        n = fi.terms[e]
        if d.is_admissible_unit():
            if not n.is_admissible_unit():
                return None
            try:
                dinv = d.inverse()
            except DuvalError:
                dinv = None
            if dinv is not None:
                r = n * dinv
                if all(fi.terms[m] == c * r for m, c in gi.terms.items()):
                    return (r, Scalar.const(1, r.rel))
                return None
            pair = (n, d)
            if all(fi.terms[m] * d == c * n for m, c in gi.terms.items()):
                return pair
            return None
        if fallback is None and d.is_regular():
            fallback = (n, d)
    if fallback is not None:
        n, d = fallback
        if n == d and fi == gi:
            return (Scalar.const(1, n.rel), Scalar.const(1, n.rel))
    return None


def projective_scale(f: GradedMap, g: GradedMap):
    """(u, e) with f_i = s^{w_i} g_i whenever s^e = u, or None if f != g in P(w)."""
    f, g = _align(f, g)
    ratios = []
    for i, (fi, gi) in enumerate(zip(f.images, g.images)):
        if fi.is_zero() != gi.is_zero():
            return None
        if fi.is_zero():
            continue
        r = coordinate_ratio(fi, gi)
        if r is None:
            return None
        ratios.append((i, r))
    if not ratios:
        return None
    w = f.weights
    e = 0
    for i, _ in ratios:
        e = gcd(e, w[i])
    wr = [w[i] // e for i, _ in ratios]
    # consistency: r_i^{w'_j} == r_j^{w'_i} as cross-multiplied pairs
    base_idx = min(range(len(ratios)), key=lambda k: wr[k])
    ni, di = ratios[base_idx][1]
    for k, (_, (nj, dj)) in enumerate(ratios):
        if k == base_idx:
            continue
        a, b = wr[k], wr[base_idx]
        if ni ** a * dj ** b != nj ** b * di ** a:
            return None
    _, ks = _bezout(wr)
    u_num = Scalar.const(1, f.rel)
    u_den = Scalar.const(1, f.rel)
    for k, (_, (n, d)) in zip(ks, ratios):
        if k > 0:
            u_num = u_num * n ** k
            u_den = u_den * d ** k
        elif k < 0:
            u_num = u_num * d ** (-k)
            u_den = u_den * n ** (-k)
    try:
        u = u_num * u_den.inverse()
    except DuvalError:
        u = (u_num, u_den)
    return u, e


def projective_equal(f: GradedMap, g: GradedMap) -> bool:
    try:
        return projective_scale(f, g) is not None
    except DimensionError:
        return False


def is_identity(m: GradedMap) -> bool:
    return projective_equal(m, identity_map(m.weights, m.rel))


# ---------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class Surface:
    weights: tuple
    equation: Poly | None
    mode: object = GENERIC
    coords: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        if self.equation is not None:
            eq = self.equation.specialize(_scalar_mode(self.mode))
            if eq.is_zero():
                raise GradednessError("surface equation is zero")
            if eq.weighted_degree(self.weights) is None:
                raise GradednessError("surface equation is not quasi-homogeneous")
            object.__setattr__(self, "equation", eq)

    @property
    def rel(self) -> bool:
        return self.mode == SIXTH

    @property
    def degree(self):
        return None if self.equation is None else self.equation.weighted_degree(self.weights)

    def prepare(self, m: GradedMap) -> GradedMap:
        if m.weights != self.weights:
            raise DimensionError(f"map {m.name} has weights {m.weights}, surface has {self.weights}")
        return m.specialize(self.mode)

    def identity(self) -> GradedMap:
        return identity_map(self.weights, self.rel, self.coords)


def verify_automorphism(S: Surface, m: GradedMap) -> Scalar:
    """Unit c with equation(m) == c * equation."""
    if S.equation is None:
        raise NotAnAutomorphismError("surface has no equation to check against")
    m = S.prepare(m)
    g = S.equation.substitute(m.images)
    c = proportionality_scalar(g, S.equation)
    if c is None:
        residual = _residual(g, S.equation)
        raise NotAnAutomorphismError(
            f"{m.name} does not preserve the equation; residual {residual.to_str(S.coords)}",
            residual=residual,
        )
    return c


def _residual(g: Poly, f: Poly) -> Poly:
    for e in f.support():
        if e in g.terms:
            try:
                c = g.terms[e] * f.terms[e].inverse()
            except DuvalError:
                continue
            return g - f.scale(c)
    return g


def element_order(S: Surface | None, m: GradedMap, cap: int = 24) -> int:
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if S is not None:
        m = S.prepare(m)
    if m.free_symbols():
        raise DuvalError(f"{m.name} still depends on {sorted(m.free_symbols())}")
    ident = identity_map(m.weights, m.rel)
    p = m
    for n in range(1, cap + 1):
        if projective_equal(p, ident):
            return n
        p = compose_maps(m, p)
    raise OrderExceedsCapError(f"order of {m.name} exceeds {cap}")


def inverse_of(m: GradedMap) -> GradedMap:
    if m.declared_inverse is None:
        raise DuvalError(f"{m.name} has no declared inverse")
    return m.declared_inverse


def verify_declared_inverse(m: GradedMap, S: Surface | None = None) -> bool:
    if m.declared_inverse is None:
        return False
    if S is not None:
        m = S.prepare(m)
    inv = m.declared_inverse
    ident = identity_map(m.weights, m.rel)
    return projective_equal(compose_maps(m, inv), ident) and projective_equal(
        compose_maps(inv, m), ident
    )


def conjugate(outer: GradedMap, inner: GradedMap) -> GradedMap:
    """outer * inner * outer^-1"""
    return compose_maps(outer, compose_maps(inner, inverse_of(outer)),
                        name=f"{outer.name}.{inner.name}")


def verify_family_relation(
    S: Surface | None,
    outer: GradedMap,
    family: GradedMap,
    expected_sub: Mapping[str, Scalar],
) -> bool:
    if S is not None:
        outer, family = S.prepare(outer), S.prepare(family)
    lhs = conjugate(outer, family)
    rhs = family.subs(expected_sub)
    return projective_equal(lhs, rhs)


@dataclass(frozen=True)
class WordRef:
    """One letter of a word: a named map, possibly inverted or evaluated at parameter values."""

    name: str
    inverse: bool = False
    at: tuple = ()  # ((symbol, value_text), ...)

    def __str__(self):
        s = self.name
        if self.at:
            s += "(" + ",".join(f"{k}={v}" for k, v in self.at) + ")"
        if self.inverse:
            s += "^-1"
        return s


def evaluate_word(S: Surface | None, word: Sequence[WordRef], maps: Mapping[str, GradedMap],
                  weights=None, rel=None) -> GradedMap:
    """Product of the word; the rightmost letter is applied first."""
    if weights is None:
        weights = S.weights if S is not None else next(iter(maps.values())).weights
    if rel is None:
        rel = S.rel if S is not None else False
    out = identity_map(weights, rel)
    for ref in reversed(list(word)):
        if ref.name in ("id", "1"):
            continue
        if ref.name not in maps:
            raise KeyError(f"unknown map reference {ref.name!r}")
        m = maps[ref.name]
        if S is not None:
            m = S.prepare(m)
        if ref.at:
            m = m.subs({k: _value(v, m.rel) for k, v in ref.at})
        if ref.inverse:
            m = inverse_of(m)
        out = compose_maps(m, out)
    return out


def _value(v, rel) -> Scalar:
    if isinstance(v, Scalar):
        return v.with_relation(rel)
    p = parse_poly(str(v), [], rel=rel)
    return p.const_value()


def verify_word_relation(S: Surface | None, lhs, rhs, maps: Mapping[str, GradedMap]) -> bool:
    a = evaluate_word(S, lhs, maps)
    b = evaluate_word(S, rhs, maps)
    return projective_equal(a, b)


# camelCase aliases mirroring the operation names
composeMaps = compose_maps
projectiveEqual = projective_equal
verifyAutomorphism = verify_automorphism
elementOrder = element_order
verifyFamilyRelation = verify_family_relation
verifyWordRelation = verify_word_relation
verifyDeclaredInverse = verify_declared_inverse
