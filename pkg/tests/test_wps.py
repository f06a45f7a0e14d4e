import pytest

from duval.coeffring import I, Scalar
from duval.errors import DimensionError, GradednessError, NotAnAutomorphismError, OrderExceedsCapError
from duval.poly import parse_poly
from duval.wps import (
    GradedMap,
    Surface,
    WordRef,
    compose_maps,
    element_order,
    identity_map,
    map_from_matrix,
    map_from_strings,
    mode_label,
    normalize_mode,
    projective_equal,
    projective_scale,
    verify_automorphism,
    verify_declared_inverse,
    verify_family_relation,
    verify_word_relation,
)

import oracles

P3 = ("x0", "x1", "x2", "x3")
W1 = (1, 1, 1, 1)


def surf(rec, mode=None):
    return Surface(rec.weights, rec.equation, mode or rec.lambda_modes[0], rec.coords)


def gm(rec, name):
    return rec.maps[name].map


def maps_of(rec, S):
    return {n: S.prepare(s.map) for n, s in rec.maps.items()}


# --- modes -----------------------------------------------------------------

def test_mode_normalisation():
    assert mode_label("generic") == "generic"
    assert mode_label("sixthRoot") == "sixth-root"
    assert mode_label("-1") == "-1"
    assert mode_label("2/4") == "1/2"
    with pytest.raises(ValueError):
        normalize_mode("0.5")


# --- construction ---------------------------------------------------------

def test_gradedness_is_checked_at_construction():
    with pytest.raises(GradednessError, match="y2"):
        map_from_strings("bad", (1, 1, 2, 3), ("y1", "y1p", "y2", "y3"), ["y1", "y1'", "y1", "y3"])
    with pytest.raises(DimensionError):
        map_from_strings("short", W1, P3, ["x0", "x1", "x2"])


def test_all_zero_images_rejected():
    with pytest.raises(GradednessError):
        map_from_strings("zero", W1, P3, ["0", "0", "0", "0"])


def test_matrix_form_equals_tuple_form():
    a = map_from_matrix("m", [[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]], P3)
    b = map_from_strings("t", W1, P3, ["-x0", "x1", "-x2", "x3"])
    assert a.images == b.images


# --- composition -------------------------------------------------------------

def test_swap_squared_is_identity(records):
    s1 = gm(records["d3-2A2"], "sigma1")
    assert compose_maps(s1, s1).images == identity_map(W1).images


def test_identity_is_neutral(records):
    g = gm(records["d2-A7"], "sigma2")
    ident = identity_map(g.weights)
    assert compose_maps(ident, g).images == g.images
    assert compose_maps(g, ident).images == g.images


def test_torus_family_composes_multiplicatively(records):
    tau = gm(records["d3-3A2"], "tau1")
    s = tau.subs({"t1": Scalar.symbol("s")})
    prod = compose_maps(tau, s)
    assert prod.images == tau.subs({"t1": Scalar.symbol("t1") * Scalar.symbol("s")}).images


def test_composition_applies_right_factor_first():
    f = map_from_strings("f", W1, P3, ["x1", "x0", "x2", "x3"])
    g = map_from_strings("g", W1, P3, ["x0", "x0 + x1", "x2", "x3"])
    fg = compose_maps(f, g)
    # (f o g)(x) = f(g(x)): substitute g's images into f's tuple
    assert fg.images == tuple(parse_poly(s, P3) for s in ("x0 + x1", "x0", "x2", "x3"))
    ref = oracles.compose(["x1", "x0", "x2", "x3"], ["x0", "x0 + x1", "x2", "x3"], P3)
    assert [oracles.expr(p.to_str(P3)) for p in fg.images] == ref


def test_weight_mismatch_raises():
    a = identity_map((1, 1, 1, 1))
    b = identity_map((1, 1, 2, 2))
    with pytest.raises(DimensionError):
        compose_maps(a, b)


# --- projective equality -----------------------------------------------------

def test_scalar_multiple_is_equal():
    a = map_from_strings("a", W1, P3, ["x0", "x1", "x2", "x3"])
    b = map_from_strings("b", W1, P3, ["2*x0", "2*x1", "2*x2", "2*x3"])
    assert projective_equal(a, b)
    u, e = projective_scale(b, a)
    assert e == 1 and u == Scalar.const(2)


def test_weighted_sign_rescaling():
    w = (1, 1, 2, 3)
    c = ("y1", "y1p", "y2", "y3")
    a = map_from_strings("a", w, c, ["y1", "y1'", "y2", "y3"])
    b = map_from_strings("b", w, c, ["-y1", "-y1'", "y2", "-y3"])
    assert projective_equal(a, b)
    # but flipping only y3 is not a rescaling
    d = map_from_strings("d", w, c, ["y1", "y1'", "y2", "-y3"])
    assert not projective_equal(a, d)


def test_even_weights_only_need_roots_of_unity():
    w = (2, 2, 4)
    c = ("u", "v", "w")
    a = map_from_strings("a", w, c, ["u", "v", "w"])
    b = map_from_strings("b", w, c, ["-u", "-v", "w"])
    assert projective_equal(a, b)


def test_distinct_involutions_are_not_equal(records):
    r = records["d4-2A1-8lines"]
    assert not projective_equal(gm(r, "sigma1"), gm(r, "sigma3"))


# --- automorphisms ---------------------------------------------------------

def test_2a2_at_minus_one(records):
    r = records["d3-2A2"]
    S = surf(r, "-1")
    assert verify_automorphism(S, gm(r, "sigmaM1")).is_one()
    assert oracles.automorphism_scalar(r.equation_text, r.coords, ["-x0", "x1", "-x2", "x3"], "-1") == 1


def test_identity_preserves_every_surface(records):
    for r in records.values():
        if r.equation is not None:
            S = surf(r)
            assert verify_automorphism(S, S.identity()).is_one()


def test_2a1_eight_lines_sigma1_scalar_matches_oracle(records):
    r = records["d4-2A1-8lines"]
    c = verify_automorphism(surf(r), gm(r, "sigma1"))
    # lambda^2 (lambda - 1)^2: not a monomial, but nonzero for every admissible lambda
    assert c.is_admissible_unit() and not c.is_const()
    ref = oracles.automorphism_scalar(r.equation_text, r.coords, r.raw_map("sigma1")["images"])
    assert oracles.is_zero(oracles.expr(c.to_str()) - ref)


def test_non_automorphism_carries_residual(records):
    r = records["d3-2A2"]
    bad = map_from_strings("bad", W1, P3, ["x0", "-x1", "x2", "x3"])
    with pytest.raises(NotAnAutomorphismError) as ei:
        verify_automorphism(surf(r), bad)
    assert ei.value.residual is not None and not ei.value.residual.is_zero()


# --- orders -----------------------------------------------------------------

def test_2a2_sixth_root_sigma_is_order_three_as_given(records):
    """The tuple as printed has order 6; only its cube is sigma_1 (see ledger)."""
    r = records["d3-2A2"]
    S = surf(r, "sixth-root")
    got = element_order(S, gm(r, "sigma6"))
    ref = oracles.map_order(r.raw_map("sigma6")["images"], r.coords, list(r.weights), "sixth-root")
    assert got == ref == 6
    cube = compose_maps(S.prepare(gm(r, "sigma6")), compose_maps(S.prepare(gm(r, "sigma6")),
                                                                  S.prepare(gm(r, "sigma6"))))
    assert projective_equal(cube, S.prepare(gm(r, "sigma1")))


def test_identity_has_order_one():
    assert element_order(None, identity_map(W1)) == 1


def test_a7_sigma2_has_order_four(records):
    r = records["d2-A7"]
    assert element_order(None, gm(r, "sigma2")) == 4
    ref = oracles.map_order(r.raw_map("sigma2")["images"], r.coords, list(r.weights))
    assert ref == 4


def test_order_cap():
    m = map_from_strings("m", (1, 1, 1), ("a", "b", "c"), ["a", "a + b", "c"])
    with pytest.raises(OrderExceedsCapError):
        element_order(None, m, cap=10)


def test_family_member_with_free_symbol_has_no_order(records):
    from duval.errors import DuvalError

    with pytest.raises(DuvalError):
        element_order(None, gm(records["d3-2A2"], "tau"))


# --- relations ---------------------------------------------------------------

def test_sigma1_inverts_the_torus(records):
    r = records["d3-2A2"]
    S = surf(r)
    t = Scalar.symbol("t")
    assert verify_family_relation(S, gm(r, "sigma1"), gm(r, "tau"), {"t": t.inverse()})
    assert not verify_family_relation(S, gm(r, "sigma1"), gm(r, "tau"), {"t": t})


def test_identity_conjugation_is_trivial(records):
    r = records["d2-A7"]
    ident = identity_map(r.weights).with_inverse(identity_map(r.weights))
    assert verify_family_relation(None, ident, gm(r, "alpha"), {"a": Scalar.symbol("a")})


def test_a7_sigma2_scales_additive_parameter(records):
    r = records["d2-A7"]
    sub = {"a": Scalar.const(-I) * Scalar.symbol("a")}
    assert verify_family_relation(None, gm(r, "sigma2"), gm(r, "alpha"), sub)


def test_2a1_eight_lines_word_relations_at_minus_one(records):
    r = records["d4-2A1-8lines"]
    S = surf(r, "-1")
    maps = maps_of(r, S)
    sig, sig_inv = WordRef("sigmaM1"), WordRef("sigmaM1", inverse=True)
    tau_m1 = WordRef("tau", at=(("t", "-1"),))
    assert verify_word_relation(S, [sig, WordRef("sigma3"), sig_inv], [tau_m1, WordRef("sigma3")], maps)
    # literal sigma.sigma1 = sigma2 fails; it holds only after an element of the torus
    lhs = [sig, WordRef("sigma1"), sig_inv]
    assert not verify_word_relation(S, lhs, [WordRef("sigma2")], maps)
    assert verify_word_relation(S, lhs, [tau_m1, WordRef("sigma2")], maps)


def test_m_times_inverse_is_identity(records):
    for r in records.values():
        for name, spec in r.maps.items():
            if spec.map.declared_inverse is None:
                continue
            mode = next((m for m in r.lambda_modes if spec.applies(m)), None)
            S = surf(r, mode) if r.equation is not None else None
            maps = maps_of(r, S) if S else {n: s.map for n, s in r.maps.items()}
            assert verify_word_relation(S, [WordRef(name), WordRef(name, inverse=True)], [], maps), name


def test_declared_inverses(records):
    a = records["d4-A3-A1"]
    assert verify_declared_inverse(gm(a, "alpha"))
    assert verify_declared_inverse(gm(a, "tau"))
    assert verify_declared_inverse(gm(records["d3-2A2"], "sigma1"))
    plain = map_from_strings("p", W1, P3, ["x1", "x0", "x2", "x3"])
    assert not verify_declared_inverse(plain)
    wrong = plain.with_inverse(map_from_strings("q", W1, P3, ["x0", "x1", "x3", "x2"]))
    assert not verify_declared_inverse(wrong)


def test_graded_map_is_immutable_value():
    m = map_from_strings("m", W1, P3, ["x1", "x0", "x2", "x3"])
    assert isinstance(m, GradedMap)
    with pytest.raises(Exception):
        m.name = "other"
