"""Sparse multivariate polynomials with ``Scalar`` coefficients.

A ``Poly`` lives in a fixed ambient ring k[x_0, ..., x_{n-1}]; exponent
vectors are tuples of nonnegative ints.  Coefficients may involve formal
symbols (lambda, t, a, ...), so a Poly doubles as a polynomial family.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping, Sequence

from .coeffring import I, LAMBDA, OMEGA, ONE_C, ZETA, CycNum, Scalar
from .errors import DimensionError, FlagMismatchError, ParseError, UnknownIdentifierError

CONSTANTS = {"eps2": I, "eps3": OMEGA, "zeta": ZETA, "i": I}
DEFAULT_SYMBOLS = frozenset(
    {LAMBDA, "t", "s", "a", "b", "t1", "t2", "s1", "s2", "a1", "a2", "a3", "u"}
)


class _ZeroMarker:
    """Returned by ``weighted_degree`` for the zero polynomial."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "ZERO"


ZERO_DEGREE = _ZeroMarker()


def _exp_add(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    __slots__ = ("terms", "nvars", "rel", "_hash")

    def __init__(self, terms: Mapping | None, nvars: int, rel: bool = False):
        self.nvars = nvars
        self.rel = bool(rel)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise DimensionError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = Scalar.coerce(c, self.rel)
            if c.rel != self.rel:
                raise FlagMismatchError("coefficient flag differs from polynomial flag")
            if c.is_zero():
                continue
            if e in clean:
                c = clean[e] + c
                if c.is_zero():
                    del clean[e]
                    continue
            clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _clean(cls, terms: dict, nvars: int, rel: bool) -> "Poly":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj.rel = rel
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, rel: bool = False) -> "Poly":
        return cls._clean({}, nvars, rel)

    @classmethod
    def const(cls, c, nvars: int, rel: bool = False) -> "Poly":
        c = Scalar.coerce(c, rel)
        if c.is_zero():
            return cls.zero(nvars, rel)
        return cls._clean({(0,) * nvars: c}, nvars, rel)

    @classmethod
    def var(cls, i: int, nvars: int, rel: bool = False) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls._clean({tuple(e): Scalar.const(1, rel)}, nvars, rel)

    @classmethod
    def identity_images(cls, nvars: int, rel: bool = False) -> list["Poly"]:
        return [cls.var(i, nvars, rel) for i in range(nvars)]

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def const_value(self) -> Scalar:
        if not self.terms:
            return Scalar.const(0, self.rel)
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def symbols(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.symbols()
        return out

    def support(self) -> list:
        return sorted(self.terms, key=_grlex_key, reverse=True)

    # arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise DimensionError("polynomials live in different ambient rings")
            if other.rel != self.rel:
                raise FlagMismatchError("polynomials disagree on the lambda relation flag")
            return other
        return Poly.const(other, self.nvars, self.rel)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        acc = dict(self.terms)
        for e, c in other.terms.items():
            v = acc.get(e)
            v = c if v is None else v + c
            if v.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = v
        return Poly._clean(acc, self.nvars, self.rel)

    __radd__ = __add__

    def __neg__(self):
        return Poly._clean({e: -c for e, c in self.terms.items()}, self.nvars, self.rel)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (Scalar, CycNum, int)) or not isinstance(other, Poly):
            return self.scale(other)
        other = self._lift(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars, self.rel)
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _exp_add(e1, e2)
                c = c1 * c2
                v = acc.get(e)
                acc[e] = c if v is None else v + c
        return Poly._clean({e: c for e, c in acc.items() if not c.is_zero()}, self.nvars, self.rel)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        c = Scalar.coerce(c, self.rel)
        if c.is_zero():
            return Poly.zero(self.nvars, self.rel)
        if c.is_one():
            return self
        acc = {}
        for e, v in self.terms.items():
            w = v * c
            if not w.is_zero():
                acc[e] = w
        return Poly._clean(acc, self.nvars, self.rel)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.nvars, self.rel)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "Poly":
        acc = {}
        rel = fn(Scalar.const(1, self.rel)).rel
        for e, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                acc[e] = v
        return Poly(acc, self.nvars, rel)

    def subs_symbols(self, mapping: Mapping[str, Scalar]) -> "Poly":
        if not mapping:
            return self
        return self.map_coeffs(lambda c: c.subs_many(mapping))

    def with_relation(self, rel: bool) -> "Poly":
        if rel == self.rel:
            return self
        return self.map_coeffs(lambda c: c.with_relation(rel))

    def specialize(self, mode) -> "Poly":
        return self.map_coeffs(lambda c: c.specialize(mode))

    # grading ------------------------------------------------------------
    def weighted_degree(self, w: Sequence[int]):
        """Common weighted degree, ``None`` if mixed, ``ZERO_DEGREE`` for 0."""
        if len(w) != self.nvars:
            raise DimensionError(f"{len(w)} weights for {self.nvars} coordinates")
        if not self.terms:
            return ZERO_DEGREE
        degs = {sum(a * b for a, b in zip(e, w)) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    # substitution -------------------------------------------------------
    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        if len(images) != self.nvars:
            raise DimensionError(f"{len(images)} images for {self.nvars} coordinates")
        if not self.terms:
            target_n = images[0].nvars if images else self.nvars
            return Poly.zero(target_n, images[0].rel if images else self.rel)
        target_n = images[0].nvars
        rel = images[0].rel
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                if k == 1:
                    cache[key] = images[i]
                elif k % 2 == 0:
                    h = power(i, k // 2)
                    cache[key] = h * h
                else:
                    cache[key] = power(i, k - 1) * images[i]
            return cache[key]

        out = Poly.zero(target_n, rel)
        for e, c in self.terms.items():
            piece = Poly.const(c.with_relation(rel), target_n, rel)
            for i, k in enumerate(e):
                if k:
                    piece = piece * power(i, k)
            out = out + piece
        return out

    # comparison / display ----------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Scalar, CycNum)):
                other = Poly.const(other, self.nvars, self.rel)
            else:
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def to_str(self, coords: Sequence[str] | None = None) -> str:
        coords = list(coords) if coords else [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for e in self.support():
            c = self.terms[e]
            mono = "*".join(
                coords[i] if k == 1 else f"{coords[i]}^{k}" for i, k in enumerate(e) if k
            )
            cs = c.to_str()
            if not mono:
                pieces.append(cs if len(c.terms) == 1 and " " not in cs else f"({cs})")
                continue
            if c.is_one():
                pieces.append(mono)
            elif (-c).is_one():
                pieces.append("-" + mono)
            elif len(c.terms) == 1 and " " not in cs:
                pieces.append(f"{cs}*{mono}")
            else:
                pieces.append(f"({cs})*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()})"


# ---------------------------------------------------------------------------
# free functions mirroring the operation names


def weighted_degree(p: Poly, w: Sequence[int]):
    return p.weighted_degree(w)


def substitute_tuple(p: Poly, images: Sequence[Poly]) -> Poly:
    return p.substitute(images)


def proportionality_scalar(g: Poly, f: Poly) -> Scalar | None:
    """Unit ``c`` with ``g == c*f``, or ``None``.

    The ratio is read off one term of ``f`` with an invertible coefficient
    and then checked against every term.
    """
    if f.is_zero():
        raise ValueError("proportionality against the zero polynomial")
    if g.nvars != f.nvars or set(g.terms) != set(f.terms):
        return None
    pivot = None
    for e in f.support():
        try:
            inv = f.terms[e].inverse()
        except Exception:
            continue
        pivot = (e, inv)
        break
    if pivot is None:
        return None
    e, inv = pivot
    c = g.terms[e] * inv
    if not c.is_admissible_unit():
        return None
    for m, v in f.terms.items():
        if g.terms[m] != v * c:
            return None
    return c


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*'*)|(?P<op>[-+*/^()=]))"
)


def canonical_coord_name(name: str) -> str:
    """y1'' -> y1pp"""
    stripped = name.rstrip("'")
    return stripped + "p" * (len(name) - len(stripped))


def display_coord_name(name: str) -> str:
    """y1pp -> y1'' (only for names with a digit before the trailing p's)."""
    m = re.fullmatch(r"(.*\d)(p+)", name)
    if not m:
        return name
    return m.group(1) + "'" * len(m.group(2))


def _tokenize(src: str):
    pos = 0
    toks = []
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, src, coords, symbols, rel):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.coords = {canonical_coord_name(c): k for k, c in enumerate(coords)}
        self.nvars = len(coords)
        self.symbols = symbols
        self.rel = rel

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2], self.src)
        return t

    def parse(self) -> Poly:
        lhs = self.expr()
        t = self.peek()
        if t[1] == "=":
            self.take()
            rhs = self.expr()
            lhs = lhs - rhs
            t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2], self.src)
        return lhs

    def expr(self) -> Poly:
        left = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> Poly:
        left = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                left = left.scale(self._unit_inverse(right, pos))
        return left

    def _unit_inverse(self, p: Poly, pos) -> Scalar:
        if not p.is_const():
            raise ParseError("division by a non-constant expression", pos, self.src)
        c = p.const_value()
        if c.is_zero():
            raise ParseError("division by zero", pos, self.src)
        try:
            return c.inverse()
        except Exception as exc:
            raise ParseError(f"division by a non-unit ({exc})", pos, self.src) from None

    def unary(self) -> Poly:
        t = self.peek()
        if t[1] == "-":
            self.take()
            return -self.unary()
        if t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^":
            _, _, pos = self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be an integer literal", t[2], self.src)
            k = int(t[1])
            if neg:
                return Poly.const(self._unit_inverse(base, pos) ** k, self.nvars, self.rel)
            return base ** k
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            return Poly.const(int(val), self.nvars, self.rel)
        if kind == "id":
            name = canonical_coord_name(val)
            if name in self.coords:
                return Poly.var(self.coords[name], self.nvars, self.rel)
            if name in CONSTANTS:
                return Poly.const(CONSTANTS[name], self.nvars, self.rel)
            if name in self.symbols:
                return Poly.const(Scalar.symbol(name, self.rel), self.nvars, self.rel)
            raise UnknownIdentifierError(f"unknown identifier {val!r}", pos, self.src)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos, self.src)


def parse_poly(
    src: str,
    coords: Sequence[str],
    symbols: Iterable[str] | None = None,
    rel: bool = False,
) -> Poly:
    """Parse an expression (or ``lhs = rhs``, giving lhs - rhs) into a Poly."""
    syms = DEFAULT_SYMBOLS if symbols is None else frozenset(symbols) | DEFAULT_SYMBOLS
    if src.count("=") > 1:
        raise ParseError("at most one '=' allowed", src.index("=", src.index("=") + 1), src)
    return _Parser(src, list(coords), syms, rel).parse()


parsePoly = parse_poly
