"""Radical / centric / elementary-abelian classification on small groups
where the answers can be checked by hand."""

import numpy as np

from co3geo import permutation as pm
from co3geo.complexes import order_complex
from co3geo.radicals import (SmallGroup, benson_closure, bouc_poset,
                             homotopy_compare, p_subgroups, quillen_poset,
                             sylow_subgroup)


def cyc(points, degree):
    out = np.arange(degree, dtype=pm.DTYPE)
    for a, b in zip(points, points[1:] + points[:1]):
        out[a] = b
    return out


def make_s4():
    return SmallGroup([cyc([0, 1], 4), cyc([0, 1, 2, 3], 4)], 4)


def test_sylow_subgroup_orders():
    G = make_s4()
    assert len(sylow_subgroup(G, 2)) == 8
    assert len(sylow_subgroup(G, 3)) == 3


def test_p_subgroups_of_s4():
    G = make_s4()
    recs = p_subgroups(G, 2)
    by_order = {}
    for r in recs:
        by_order.setdefault(r.order, []).append(r)
    # classes of 2-subgroups of S4: two of order 2, two of order 4
    # (V4 normal and the cyclic C4... plus the non-normal V4), one of order 8
    assert sorted(r.order for r in recs) == [2, 2, 4, 4, 4, 8]
    # radical classes: the normal V4 and the dihedral Sylow
    radical_orders = sorted(r.order for r in recs if r.is_radical)
    assert radical_orders == [4, 8]
    normal_v4 = [r for r in recs
                 if r.order == 4 and r.is_radical and r.is_elementary_abelian]
    assert len(normal_v4) == 1
    assert normal_v4[0].normalizer_order == 24


def test_quillen_poset_of_s4_is_connected_and_contractible():
    G = make_s4()
    recs = p_subgroups(G, 2)
    cmp = homotopy_compare(bouc_poset(G, 2, recs), quillen_poset(G, 2, recs))
    assert cmp["equal"]
    assert cmp["euler_1"] == 0
    assert not any(cmp["betti_1"])


def test_bouc_poset_vertex_count_s4():
    G = make_s4()
    P = bouc_poset(G, 2)
    C = order_complex(P)
    # the normal V4 (one conjugate) plus the three Sylow subgroups
    assert len(list(C.vertices())) == 4


def test_benson_closure_s4():
    G = make_s4()
    out = benson_closure(G, 2)
    # Z(S) for a dihedral Sylow is order 2, generated by a double
    # transposition; its closure under fusion and commuting products is
    # the set of all three double transpositions
    elems = [k for k in out["elements"]]
    assert len(elems) == 3
    assert out["rank_spectrum"] == [1, 2]
