from fractions import Fraction

import pytest

from duval.coeffring import I, LAM6, OMEGA, ZETA, CycNum, Scalar, roots_of_unity, zeta_power
from duval.errors import FlagMismatchError, NotAUnitError

import oracles


def sym(name, rel=False, exp=1):
    return Scalar.symbol(name, rel, exp)


def as_sympy(c: CycNum):
    return oracles.cyc_value(c.num, c.den)


# --- CycNum -----------------------------------------------------------------

def test_designated_constants_satisfy_their_polynomials():
    assert (I * I + 1).is_zero()
    assert (OMEGA * OMEGA + OMEGA + 1).is_zero()
    assert (LAM6 * LAM6 - LAM6 + 1).is_zero()
    assert I == ZETA**3 and OMEGA == ZETA**4 and LAM6 == ZETA**2


def test_omega_squared_matches_hand_reduction():
    # z^8 = z^4 * z^4 and z^4 = z^2 - 1, so z^8 = z^4 - 2 z^2 + 1 = -z^2 = -omega - 1
    assert OMEGA * OMEGA == -OMEGA - 1


@pytest.mark.parametrize("a,b", [
    ((1, 2, 3, 4), (0, -1, Fraction(1, 2), 7)),
    ((Fraction(3, 5), 0, 0, -1), (2, 2, 2, 2)),
    ((0, 0, 0, 1), (0, 0, 0, 1)),
])
def test_products_agree_with_sympy_reduction(a, b):
    x, y = CycNum(a), CycNum(b)
    ref = oracles.reduce_z(as_sympy(x) * as_sympy(y))
    assert oracles.is_zero(as_sympy(x * y) - ref)


def test_inverse_and_division():
    x = CycNum((1, 2, 0, -3), 4)
    assert x * x.inverse() == CycNum.rational(1)
    assert (I.inverse()) == -I
    with pytest.raises(ZeroDivisionError):
        CycNum.rational(0).inverse()


def test_canonical_storage_is_unique():
    assert CycNum((2, 4, 6, 8), 4) == CycNum((1, 2, 3, 4), 2)
    assert hash(CycNum((2, 4, 6, 8), 4)) == hash(CycNum((1, 2, 3, 4), 2))
    with pytest.raises(ValueError):
        CycNum((1, 2, 3))


def test_roots_of_unity():
    for n in (1, 2, 3, 4, 6, 12):
        rs = roots_of_unity(n)
        assert len(set(rs)) == n
        assert all(r**n == CycNum.rational(1) for r in rs)
    assert zeta_power(12) == CycNum.rational(1)
    assert zeta_power(-1) * ZETA == CycNum.rational(1)


def test_norm_is_rational_and_multiplicative():
    x, y = CycNum((1, 1, 0, 0)), CycNum((2, 0, -1, 3))
    assert x.norm() * y.norm() == (x * y).norm()
    # norm over Q: product of the four conjugates
    assert x.conjugate(1) == x


# --- Scalar ---------------------------------------------------------------

def test_lambda_relation_rewrites_eagerly():
    lam = sym("lambda", rel=True)
    assert lam * lam == lam - 1
    assert lam**6 == Scalar.const(1, rel=True)
    for mono in (lam**k for k in range(12)):
        assert all(dict(m).get("lambda", 0) <= 1 for m in mono.terms)


def test_unit_cancellation():
    assert (sym("t") * sym("t", exp=-1)).is_one()


def test_mismatched_flags_raise():
    with pytest.raises(FlagMismatchError):
        sym("t") + sym("t", rel=True)
    with pytest.raises(FlagMismatchError):
        sym("t") * sym("t", rel=True)


def test_invert_monomials():
    x = Scalar.const(2) * sym("t") ** 2
    assert x.inverse() == Scalar.const(Fraction(1, 2)) * sym("t", exp=-2)
    assert Scalar.const(I).inverse() == Scalar.const(-I)
    with pytest.raises(NotAUnitError):
        (sym("lambda") + 1).inverse()
    with pytest.raises(ZeroDivisionError):
        Scalar.const(0).inverse()


def test_invert_under_relation():
    lam = sym("lambda", rel=True)
    # lambda^-1 = 1 - lambda when lambda^2 - lambda + 1 = 0
    assert lam.inverse() == Scalar.const(1, rel=True) - lam
    assert (lam - 1).inverse() * (lam - 1) == Scalar.const(1, rel=True)


def test_substitute_symbol_examples():
    t, a, lam = sym("t"), sym("a"), sym("lambda")
    assert (t**2).subs("t", t.inverse()) == sym("t", exp=-2)
    assert (lam * (lam - 1)).subs("lambda", Scalar.const(-1)) == Scalar.const(2)
    assert (a**2).subs("a", Scalar.const(-I) * a) == -(a**2)
    with pytest.raises(NotAUnitError):
        sym("t", exp=-1).subs("t", t + 1)


def test_substituting_lam6_commutes_with_reduction():
    lam_r = sym("lambda", rel=True)
    x = lam_r**5 + Scalar.const(3, rel=True) * lam_r**2 - lam_r
    raw = sym("lambda") ** 5 + Scalar.const(3) * sym("lambda") ** 2 - sym("lambda")
    v_raw = raw.subs("lambda", Scalar.const(LAM6))
    v_red = x.with_relation(False).subs("lambda", Scalar.const(LAM6))
    assert v_raw == v_red


def test_to_str_round_trips_through_the_parser():
    from duval.poly import parse_poly

    x = Scalar.const(I) * sym("t", exp=-2) - Scalar.const(Fraction(3, 2)) * sym("lambda")
    assert parse_poly(x.to_str(), []).const_value() == x
