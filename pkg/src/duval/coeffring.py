"""Exact coefficients: the 12th cyclotomic field and Laurent expressions over it.

``CycNum`` is an element of Q(zeta) with zeta a primitive 12th root of unity,
stored as integer numerators over a positive common denominator with respect
to the basis 1, zeta, zeta^2, zeta^3 (reduction modulo zeta^4 - zeta^2 + 1).

``Scalar`` is a Laurent polynomial in named symbols (``lambda``, ``t``, ``a``,
...) with ``CycNum`` coefficients.  When ``rel`` is set, the symbol
``lambda`` obeys lambda^2 = lambda - 1, i.e. it is a primitive sixth root of
unity, and every stored exponent of ``lambda`` is 0 or 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping

from .errors import FlagMismatchError, NotAUnitError

LAMBDA = "lambda"

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by symbol name


def _normalize(nums, den):
    if den < 0:
        nums = [-n for n in nums]
        den = -den
    g = den
    for n in nums:
        g = gcd(g, n)
        if g == 1:
            break
    if g > 1:
        nums = [n // g for n in nums]
        den //= g
    return tuple(nums), den


class CycNum:
    """Element c0 + c1*zeta + c2*zeta^2 + c3*zeta^3 of Q(zeta_12)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, coeffs=(0, 0, 0, 0), den=1):
        if len(coeffs) != 4:
            raise ValueError("CycNum needs exactly 4 coefficients")
        if any(not isinstance(c, int) for c in coeffs) or not isinstance(den, int):
            fr = [Fraction(c) for c in coeffs] + [Fraction(den)]
            lcm = 1
            for f in fr:
                lcm = lcm * f.denominator // gcd(lcm, f.denominator)
            ints = [int(f * lcm) for f in fr]
            coeffs, den = ints[:4], ints[4]
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(list(coeffs), den)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num, obj.den = _normalize(num, den)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> "CycNum":
        q = Fraction(q)
        return cls._raw([q.numerator, 0, 0, 0], q.denominator)

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Rational)):
            return cls.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to CycNum")

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(n, self.den) for n in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not (self.num[1] or self.num[2] or self.num[3])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __add__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.num, other.num
        da, db = self.den, other.den
        return CycNum._raw([a[i] * db + b[i] * da for i in range(4)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw([-n for n in self.num], self.den)

    def __sub__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.num, other.num
        if not (a[1] or a[2] or a[3]):
            return CycNum._raw([a[0] * x for x in b], self.den * other.den)
        if not (b[1] or b[2] or b[3]):
            return CycNum._raw([b[0] * x for x in a], self.den * other.den)
        c = [0] * 7
        for i in range(4):
            if a[i]:
                for j in range(4):
                    c[i + j] += a[i] * b[j]
        # zeta^4 = zeta^2 - 1, zeta^5 = zeta^3 - zeta, zeta^6 = -1
        red = [c[0] - c[4] - c[6], c[1] - c[5], c[2] + c[4], c[3] + c[5]]
        return CycNum._raw(red, self.den * other.den)

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "CycNum":
        """Image under the Galois automorphism zeta -> zeta^k."""
        if k % 12 not in (1, 5, 7, 11):
            raise ValueError("k must be a unit modulo 12")
        out = [0, 0, 0, 0]
        for i, n in enumerate(self.num):
            if n:
                p = _ZETA_POWERS_INT[(k * i) % 12]
                for j in range(4):
                    out[j] += n * p[j]
        return CycNum._raw(out, self.den)

    def norm(self) -> Fraction:
        p = self * self.conjugate(5) * self.conjugate(7) * self.conjugate(11)
        return p.as_fraction()

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_12)")
        if self.is_rational():
            q = Fraction(self.den, self.num[0])
            return CycNum._raw([q.numerator, 0, 0, 0], q.denominator)
        rest = self.conjugate(5) * self.conjugate(7) * self.conjugate(11)
        n = (self * rest).as_fraction()
        return rest * CycNum.rational(1 / n)

    def __truediv__(self, other):
        return self * CycNum.coerce(other).inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE_C, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, CycNum):
            try:
                other = CycNum.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def to_str(self) -> str:
        parts = []
        names = ("", "zeta", "zeta^2", "zeta^3")
        for i, n in enumerate(self.num):
            if not n:
                continue
            q = Fraction(n, self.den)
            mag = abs(q)
            sign = "-" if q < 0 else "+"
            if i == 0:
                body = str(mag)
            elif mag == 1:
                body = names[i]
            else:
                body = f"{mag}*{names[i]}"
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"CycNum({self.to_str()})"


def _zeta_powers():
    pows = [(1, 0, 0, 0)]
    cur = [1, 0, 0, 0]
    for _ in range(11):
        # multiply by zeta: shift, then reduce zeta^4 = zeta^2 - 1
        c3 = cur[3]
        cur = [-c3, cur[0], cur[1] + c3, cur[2]]
        pows.append(tuple(cur))
    return pows


_ZETA_POWERS_INT = _zeta_powers()

ZERO_C = CycNum._raw([0, 0, 0, 0], 1)
ONE_C = CycNum._raw([1, 0, 0, 0], 1)
ZETA = CycNum._raw([0, 1, 0, 0], 1)
I = ZETA ** 3
OMEGA = ZETA ** 4
LAM6 = ZETA ** 2
LAM6_CONJ = ZETA ** 10


def zeta_power(k: int) -> CycNum:
    return CycNum._raw(list(_ZETA_POWERS_INT[k % 12]), 1)


def roots_of_unity(n: int) -> list[CycNum]:
    """All n-th roots of unity lying in Q(zeta_12)."""
    return [zeta_power(k) for k in range(12) if (zeta_power(k) ** n) == ONE_C]


# --------------------------------------------------------------------------
# Scalars


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for s, e in m2:
        e2 = d.get(s, 0) + e
        if e2:
            d[s] = e2
        else:
            d.pop(s, None)
    return tuple(sorted(d.items()))


# lambda^k modulo lambda^2 - lambda + 1, as (constant, lambda-coefficient)
_LAM_POW = {0: (1, 0), 1: (0, 1), 2: (-1, 1), 3: (-1, 0), 4: (0, -1), 5: (1, -1)}


class Scalar:
    """Laurent polynomial in symbols with ``CycNum`` coefficients.

    Instances are immutable; all arithmetic returns canonical new objects.
    """

    __slots__ = ("terms", "rel", "_hash")

    def __init__(self, terms: Mapping | None = None, rel: bool = False):
        self.rel = bool(rel)
        acc: dict = {}
        for mono, c in (terms or {}).items():
            c = CycNum.coerce(c)
            if c.is_zero():
                continue
            mono = tuple(sorted((s, e) for s, e in mono if e))
            _accumulate(acc, mono, c, self.rel)
        self.terms = {m: c for m, c in acc.items() if not c.is_zero()}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict, rel: bool) -> "Scalar":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.rel = rel
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, rel: bool = False) -> "Scalar":
        c = CycNum.coerce(c)
        return cls._from_clean({} if c.is_zero() else {(): c}, rel)

    @classmethod
    def symbol(cls, name: str, rel: bool = False, exp: int = 1) -> "Scalar":
        return cls({((name, exp),): ONE_C}, rel)

    @classmethod
    def coerce(cls, x, rel: bool = False) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls.const(x, rel)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> CycNum:
        if not self.terms:
            return ZERO_C
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.terms[()]

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == ONE_C

    def is_unit(self) -> bool:
        """A single nonzero term (a monomial times a nonzero CycNum)."""
        return len(self.terms) == 1

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def _check(self, other: "Scalar"):
        if self.rel != other.rel:
            raise FlagMismatchError("operands disagree on the lambda relation flag")

    def _lift(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            self._check(other)
            return other
        return Scalar.const(other, self.rel)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m)
            v = c if v is None else v + c
            if v.is_zero():
                acc.pop(m, None)
            else:
                acc[m] = v
        return Scalar._from_clean(acc, self.rel)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._from_clean({m: -c for m, c in self.terms.items()}, self.rel)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not self.terms or not other.terms:
            return Scalar._from_clean({}, self.rel)
        if self.is_one():
            return other
        if other.is_one():
            return self
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _accumulate(acc, _mono_mul(m1, m2), c1 * c2, self.rel)
        return Scalar._from_clean({m: c for m, c in acc.items() if not c.is_zero()}, self.rel)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Scalar.const(1, self.rel)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "Scalar":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero scalar")
        if len(self.terms) != 1:
            if self.rel and LAMBDA in self.symbols():
                return self._rel_inverse()
            raise NotAUnitError(f"{self} is not a unit (more than one term)")
        (m, c), = self.terms.items()
        return Scalar({tuple((s, -e) for s, e in m): c.inverse()}, self.rel)

    def _rel_inverse(self) -> "Scalar":
        # x = p + q*lambda; x * (p + q - q*lambda) = p^2 + p*q + q^2 has no lambda
        p_terms, q_terms = {}, {}
        for m, c in self.terms.items():
            if (LAMBDA, 1) in m:
                q_terms[tuple(sq for sq in m if sq[0] != LAMBDA)] = c
            else:
                p_terms[m] = c
        p = Scalar(p_terms, True)
        q = Scalar(q_terms, True)
        lam = Scalar.symbol(LAMBDA, True)
        conj = p + q - q * lam
        n = p * p + p * q + q * q
        if len(n.terms) != 1:
            raise NotAUnitError(f"{self} is not a unit")
        return conj * n.inverse()

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    # substitution -----------------------------------------------------
    def subs(self, sym: str, val) -> "Scalar":
        """Replace every occurrence of ``sym`` by ``val`` (a Scalar or number)."""
        val = self._subs_value(val)
        if sym not in self.symbols():
            return self if val.rel == self.rel else Scalar(self.terms, val.rel)
        powers: dict = {}
        out = Scalar.const(0, val.rel)
        for m, c in self.terms.items():
            e = 0
            rest = []
            for s, k in m:
                if s == sym:
                    e = k
                else:
                    rest.append((s, k))
            if e not in powers:
                powers[e] = val ** e
            out = out + Scalar({tuple(rest): c}, val.rel) * powers[e]
        return out

    def subs_many(self, mapping: Mapping[str, "Scalar"]) -> "Scalar":
        """Simultaneous substitution of several symbols."""
        if not mapping:
            return self
        touched = [s for s in mapping if s in self.symbols()]
        if not touched:
            return self
        vals = {s: self._subs_value(v) for s, v in mapping.items()}
        rel = vals[touched[0]].rel
        cache: dict = {}
        out = Scalar.const(0, rel)
        for m, c in self.terms.items():
            piece = Scalar({tuple((s, k) for s, k in m if s not in vals): c}, rel)
            for s, k in m:
                if s in vals:
                    key = (s, k)
                    if key not in cache:
                        v = vals[s]
                        cache[key] = v ** k
                    piece = piece * cache[key]
            out = out + piece
        return out

    def _subs_value(self, val) -> "Scalar":
        if isinstance(val, Scalar):
            return val
        return Scalar.const(val, self.rel)

    def with_relation(self, rel: bool) -> "Scalar":
        """Same expression read with the lambda relation switched on or off."""
        if rel == self.rel:
            return self
        if rel:
            return Scalar(self.terms, True)
        return Scalar(self.terms, False)

    def specialize(self, mode) -> "Scalar":
        """Apply a lambda mode: ``None``/generic leaves it, 'sixth' sets rel, a number substitutes."""
        if mode is None:
            return self
        if mode == "sixth":
            return self.with_relation(True)
        return self.subs(LAMBDA, Scalar.const(mode, self.rel)).with_relation(False)

    def eval_lambda_roots(self) -> tuple["Scalar", "Scalar"]:
        """Images under lambda -> zeta^2 and lambda -> zeta^10 (rel dropped)."""
        plain = Scalar(self.terms, False)
        return (plain.subs(LAMBDA, Scalar.const(LAM6)), plain.subs(LAMBDA, Scalar.const(LAM6_CONJ)))

    def is_regular(self) -> bool:
        """Not a zero divisor (always true off the relation, for nonzero values)."""
        if not self.terms:
            return False
        if not self.rel or LAMBDA not in self.symbols():
            return True
        r1, r2 = self.eval_lambda_roots()
        return not r1.is_zero() and not r2.is_zero()

    def is_admissible_unit(self) -> bool:
        """Never vanishes for admissible parameter values.

        Off the relation, ``lambda`` ranges over k minus {0, 1}, so factors of
        lambda and (lambda - 1) are allowed; everything else must be a single
        term.  On the relation both sixth-root specializations must be units.
        """
        if not self.terms:
            return False
        if self.rel:
            if LAMBDA not in self.symbols():
                return self.is_unit()
            return all(r.is_unit() for r in self.eval_lambda_roots())
        x = self
        while LAMBDA in x.symbols() and x.subs(LAMBDA, 1).is_zero():
            x = x.divide_linear(LAMBDA, 1)
        return x.is_unit()

    def divide_linear(self, sym: str, root) -> "Scalar":
        """Exact quotient by (sym - root); raises if not divisible."""
        root = CycNum.coerce(root)
        by_exp: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for s, k in m:
                if s == sym:
                    e = k
                else:
                    rest.append((s, k))
            by_exp.setdefault(e, {})[tuple(rest)] = c
        lo = min(by_exp)
        hi = max(by_exp)
        coeffs = [Scalar(by_exp.get(k, {}), self.rel) for k in range(lo, hi + 1)]
        # synthetic division on the polynomial sym^(-lo) * self
        q = [None] * (len(coeffs) - 1)
        carry = Scalar.const(0, self.rel)
        for k in range(len(coeffs) - 1, 0, -1):
            carry = coeffs[k] + carry * root
            q[k - 1] = carry
        rem = coeffs[0] + carry * root
        if not rem.is_zero():
            raise NotAUnitError(f"{self} is not divisible by ({sym} - {root})")
        out = Scalar.const(0, self.rel)
        for k, qk in enumerate(q):
            out = out + qk * Scalar.symbol(sym, self.rel, exp=k + lo) if k + lo else out + qk
        return out

    # comparison / display --------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.const(other, self.rel)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (_mono_degree(mc[0]), mc[0]), reverse=True)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            mono = "*".join(_sym_str(s, e) for s, e in m)
            cs = c.to_str()
            compound = " " in cs.lstrip("-")
            if not mono:
                body = f"({cs})" if compound and len(self.terms) > 1 else cs
            elif c == ONE_C:
                body = mono
            elif c == -ONE_C:
                body = "-" + mono
            else:
                body = f"({cs})*{mono}" if compound else f"{cs}*{mono}"
            pieces.append(body)
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        flag = ", rel" if self.rel else ""
        return f"Scalar({self.to_str()}{flag})"


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _sym_str(s: str, e: int) -> str:
    if e == 1:
        return s
    return f"{s}^{e}"


def _accumulate(acc: dict, mono: Monomial, c: CycNum, rel: bool):
    if rel:
        k = 0
        for s, e in mono:
            if s == LAMBDA:
                k = e
                break
        if k not in (0, 1):
            base = tuple((s, e) for s, e in mono if s != LAMBDA)
            c0, c1 = _LAM_POW[k % 6]
            if c0:
                _add_term(acc, base, c * c0)
            if c1:
                _add_term(acc, _mono_mul(base, ((LAMBDA, 1),)), c * c1)
            return
    _add_term(acc, mono, c)


def _add_term(acc: dict, mono: Monomial, c: CycNum):
    v = acc.get(mono)
    acc[mono] = c if v is None else v + c


def scalar_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    """Functional form of add/mul (flag mismatch raises)."""
    x._check(y)
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def scalar_invert(x: Scalar) -> Scalar:
    return x.inverse()


def substitute_symbol(x: Scalar, sym: str, val: Scalar) -> Scalar:
    return x.subs(sym, val)


def product(items: Iterable[Scalar], rel: bool = False) -> Scalar:
    out = Scalar.const(1, rel)
    for it in items:
        out = out * it
    return out
