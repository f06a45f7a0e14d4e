import random

import numpy as np
import pytest
from sympy.combinatorics import free_group
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.named_groups import AbelianGroup, CyclicGroup, DihedralGroup

from duval.errors import ClosureExceedsCapError, DuvalError, NonClosedError
from duval.grouptool import (
    ADDITIVE,
    LatticeAction,
    closure,
    component_group,
    cyclic,
    dihedral,
    direct_product,
    fingerprint,
    fingerprint_table,
    groups_of_order_16,
    has_central_involution,
    has_element_of_order,
    klein_by_z4,
    lattice_report,
    match_named_group,
    matrix_order,
    named_collisions,
    named_groups,
    perm_table,
    substitution_from_matrix,
    verify_lattice_action,
)
from duval.wps import Surface, identity_map

import oracles


def surf(r, mode="generic"):
    return Surface(r.weights, r.equation, mode, r.coords)


def gens(r, *names):
    return [r.maps[n].map for n in names]


def family(r):
    return [r.maps[n].map for n in r.aut0_family]


def sympy_fp(t):
    return oracles.perm_group_fingerprint(oracles.table_group(t))


def ours_tuple(fp):
    return (fp.order, fp.element_orders, oracles.primary_invariants(fp.abelianization), fp.derived_order)


def _k_by_z4():
    F, a, b, c = free_group("a b c")
    rels = [a**2, b**2, c**4, a * b * a**-1 * b**-1, c * a * c**-1 * b**-1, c * b * c**-1 * a**-1]
    return FpGroup(F, rels)._to_perm_group()[0]


# --- named group table -----------------------------------------------------

REFERENCE = {
    "trivial": lambda: CyclicGroup(1),
    "Z/2": lambda: CyclicGroup(2),
    "Z/3": lambda: CyclicGroup(3),
    "Z/4": lambda: CyclicGroup(4),
    "Z/6": lambda: CyclicGroup(6),
    "(Z/2)^2": lambda: AbelianGroup(2, 2),
    "(Z/2)^3": lambda: AbelianGroup(2, 2, 2),
    "D3": lambda: DihedralGroup(3),
    "D4": lambda: DihedralGroup(4),
    "D6": lambda: DihedralGroup(6),
    "Z/2×Z/4": lambda: AbelianGroup(2, 4),
    "(Z/2)^2⋊Z/4": _k_by_z4,
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_named_fingerprints_match_sympy_constructions(name):
    ref = oracles.perm_group_fingerprint(REFERENCE[name]())
    assert ours_tuple(named_groups()[name]) == ref


def test_named_table_has_no_collisions():
    assert named_collisions() == []
    assert set(named_groups()) == set(REFERENCE)


def test_order_sixteen_groups_are_separated():
    tabs = groups_of_order_16()
    assert len(tabs) == 14
    fps = {name: fingerprint_table(t) for name, t in tabs.items()}
    assert len(set(fps.values())) == 14
    for name, t in tabs.items():
        assert ours_tuple(fps[name]) == sympy_fp(t), name
    assert match_named_group(fps["(Z/2)^2⋊Z/4"]) == "(Z/2)^2⋊Z/4"
    assert match_named_group(fps["D4×Z/2"]) is None


def test_d4_fingerprint():
    fp = fingerprint_table(dihedral(4))
    assert fp.order == 8
    assert fp.element_order_dict() == {1: 1, 2: 5, 4: 2}
    assert fp.derived_order == 2


def test_trivial_and_d3_matching():
    assert match_named_group(fingerprint_table(cyclic(1))) == "trivial"
    fp = fingerprint_table(dihedral(3))
    assert fp.element_order_dict() == {1: 1, 2: 3, 3: 2}
    assert match_named_group(fp) == "D3"


def test_fingerprint_invariants():
    for t in list(named_groups_tables()) + list(groups_of_order_16().values()):
        fp = fingerprint_table(t)
        assert sum(c for _, c in fp.element_orders) == fp.order
        assert int(np.prod(fp.abelianization or (1,))) * fp.derived_order == fp.order


def named_groups_tables():
    yield cyclic(6)
    yield dihedral(6)
    yield direct_product(cyclic(2), cyclic(4))
    yield klein_by_z4()


def test_fingerprint_invariant_under_relabelling():
    rng = random.Random(7)
    t = klein_by_z4()
    n = len(t)
    for _ in range(5):
        p = list(range(n))
        rng.shuffle(p)
        inv = np.argsort(p)
        relabelled = np.array([[p[t[inv[a], inv[b]]] for b in range(n)] for a in range(n)])
        assert fingerprint_table(relabelled) == fingerprint_table(t)


def test_non_closed_table_rejected():
    t = cyclic(4).copy()
    t[1, 1] = 1
    with pytest.raises(NonClosedError):
        fingerprint_table(t)
    with pytest.raises(NonClosedError):
        fingerprint([0, 1, 2], cyclic(4))


def test_perm_table_builds_the_graph_group():
    t = perm_table([(1, 2, 3, 0), (3, 2, 1, 0)])
    assert match_named_group(fingerprint_table(t)) == "D4"


# --- closures of catalog generators ---------------------------------------

def test_2a1_eight_lines_generic_closure(records):
    r = records["d4-2A1-8lines"]
    cl = closure(surf(r), gens(r, "sigma1", "sigma2", "sigma3"))
    assert cl.order == 8
    fp = fingerprint(cl)
    assert fp.exponent == 2 and sorted(fp.abelianization) == [2, 2, 2]
    assert ours_tuple(fp) == sympy_fp(cl.table)


def test_identity_closure():
    assert closure(None, [identity_map((1, 1, 1, 1))]).order == 1


def test_a3_four_lines_closure(records):
    r = records["d4-A3-4lines"]
    cl = closure(surf(r), gens(r, "sigma1", "sigma2", "sigma3"))
    assert cl.order == 16
    assert match_named_group(fingerprint(cl)) == "(Z/2)^2⋊Z/4"


def test_closure_size_is_order_independent(records):
    r = records["d4-A3-4lines"]
    a = closure(surf(r), gens(r, "sigma1", "sigma2", "sigma3")).order
    b = closure(surf(r), gens(r, "sigma3", "sigma1", "sigma2")).order
    assert a == b


def test_closure_cap_and_free_symbols(records):
    r = records["d4-A3-4lines"]
    with pytest.raises(ClosureExceedsCapError):
        closure(surf(r), gens(r, "sigma1", "sigma2", "sigma3"), cap=10)
    with pytest.raises(DuvalError):
        closure(surf(r), gens(r, "alpha"))


def test_a7_finite_part(records):
    r = records["d2-A7"]
    cg = component_group(None, gens(r, "sigma1", "sigma2"), family(r))
    assert cg.order == 8
    assert has_central_involution(cg.table)
    assert has_element_of_order(cg.table, 4)
    assert match_named_group(fingerprint_table(cg.table)) == "Z/2×Z/4"


def test_a5_finite_part_is_cyclic_of_order_six(records):
    r = records["d3-A5"]
    cg = component_group(None, gens(r, "sigma"), family(r))
    assert match_named_group(fingerprint_table(cg.table)) == "Z/6"


def test_component_group_quotients_by_the_torus(records):
    r = records["d3-2A2"]
    S = surf(r, "-1")
    cl = closure(S, gens(r, "sigma1", "sigmaM1"))
    cg = component_group(S, gens(r, "sigma1", "sigmaM1"), family(r))
    assert cl.order == 8 and cg.order == 4 and len(cg.kernel) == 2


def test_lagrange_for_generator_orders(records):
    from duval.wps import element_order

    for cid, names in [("d4-A3-4lines", ("sigma1", "sigma2", "sigma3")),
                       ("d3-3A2", ("sigma2", "sigma3")), ("d2-A7", ("sigma1", "sigma2"))]:
        r = records[cid]
        S = surf(r) if r.equation is not None else None
        n = closure(S, gens(r, *names)).order
        for g in gens(r, *names):
            assert n % element_order(S, g) == 0


# --- lattice actions -------------------------------------------------------

def test_3a2_d3_action():
    s2 = [[-1, -1], [0, 1]]
    s3 = [[0, 1], [-1, -1]]
    act = LatticeAction("3A2", {"s2": s2, "s3": s3},
                        relations=[(["s2", "s2"], []), (["s3", "s3", "s3"], []),
                                   (["s2", "s3", "s2"], ["s3^-1"])],
                        orders={"s2": 2, "s3": 3}, symbols=("t1", "t2"))
    assert verify_lattice_action(act)
    # numpy cross-check of the conjugation relation
    a, b = np.array(s2), np.array(s3)
    assert (a @ b @ a == np.round(np.linalg.inv(b))).all()


def test_transposed_3a2_matrix_breaks_the_dihedral_relation():
    """[[-1,0],[-1,1]] is the column form of sigma_2; mixed with the row form of sigma_3 it fails."""
    act = LatticeAction("3A2-col", {"s2": [[-1, 0], [-1, 1]], "s3": [[0, 1], [-1, -1]]},
                        relations=[(["s2", "s3", "s2"], ["s3^-1"])], orders={"s2": 2, "s3": 3})
    rep = lattice_report(act)
    assert rep["orders"]["s2"][2] and rep["orders"]["s3"][2]
    assert rep["relations"][0][2] is False


def test_identity_lattice_action():
    act = LatticeAction("id", {"e": [[1, 0], [0, 1]]}, relations=[(["e"], [])], orders={"e": 1})
    assert verify_lattice_action(act)


def test_d5_2a1_involution():
    act = LatticeAction("d5", {"s2": [[1, 0], [-1, -1]]}, relations=[(["s2", "s2"], [])], orders={"s2": 2})
    assert verify_lattice_action(act)


def test_unipotent_three_cycle_has_order_three():
    act = LatticeAction("A1-3l", {"s3": [[0, 1], [-1, -1]]}, orders={"s3": 3}, kind=ADDITIVE,
                        symbols=("a1", "a2"))
    assert verify_lattice_action(act)
    sub = substitution_from_matrix(act, "s3")
    assert sub["a1"].to_str() == "a2"
    assert sub["a2"].to_str() in ("-a1 - a2", "-a2 - a1")


def test_non_unimodular_torus_matrix_rejected():
    act = LatticeAction("bad", {"g": [[2, 0], [0, 1]]}, symbols=("t1", "t2"))
    assert not verify_lattice_action(act)


def test_mixed_action_rejects_cross_terms():
    act = LatticeAction("mix", {"g": [[-1, 1], [0, 1]]}, symbols=("a", "t"), kinds=(ADDITIVE, "torus"))
    assert not verify_lattice_action(act)
    with pytest.raises(DuvalError):
        substitution_from_matrix(act, "g")


def test_stated_order_must_be_exact():
    act = LatticeAction("o", {"g": [[0, 1], [-1, 0]]}, orders={"g": 2})
    assert not verify_lattice_action(act)
    assert matrix_order([[0, 1], [-1, 0]]) == 4
