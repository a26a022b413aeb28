import pytest

from co3geo.complexes import (Poset, TypedComplex, euler_by_orbit_counting,
                              order_complex)


def solid(verts):
    C = TypedComplex()
    C.add_simplex(verts)
    return C


def boundary(verts):
    """The boundary sphere of a simplex."""
    C = TypedComplex()
    for i in range(len(verts)):
        C.add_simplex(tuple(v for j, v in enumerate(verts) if j != i))
    return C


def test_face_closure_and_counts():
    C = solid((0, 1, 2))
    assert C.n_simplices() == 7
    assert C.dim() == 2
    assert C.maximal_simplices() == [(0, 1, 2)]
    assert C.coface_count[(0, 1)] == 1


def test_solid_simplex_is_contractible():
    for k in range(1, 5):
        C = solid(tuple(range(k + 1)))
        assert C.euler_reduced() == 0
        assert C.reduced_betti() == [0] * (k + 1)
        assert C.is_cone() is not None


def test_sphere_homology():
    for k in range(2, 5):
        S = boundary(tuple(range(k + 1)))       # a (k-1)-sphere
        betti = S.reduced_betti()
        want = [0] * k
        want[k - 1] = 1
        assert betti == want
        assert S.euler_reduced() == (1 if k % 2 else -1)
        assert S.is_cone() is None


def test_remove_star_and_residue():
    C = solid((0, 1, 2, 3))
    res = C.residue(3)
    assert res.maximal_simplices() == [(0, 1, 2)]
    C.remove_star(3)
    assert C.maximal_simplices() == [(0, 1, 2)]
    with pytest.raises(ValueError):
        C.remove_maximal((0, 1))    # has cofaces


def test_dump_load_roundtrip():
    C = boundary((0, 1, 2, 3))
    D = TypedComplex.load(C.dump())
    assert D.content_hash() == C.content_hash()
    assert D.reduced_betti() == C.reduced_betti()


def test_flag_typed_rejects_repeated_types():
    C = TypedComplex(flag_typed=True)
    C.add_vertex(0, "a")
    C.add_vertex(1, "a")
    C.add_vertex(2, "b")
    C.add_simplex((0, 2))
    with pytest.raises(ValueError):
        C.add_simplex((0, 1))


def test_order_complex_of_chain_poset():
    P = Poset()
    for i in range(4):
        P.add_element(i, 0)
    for i in range(4):
        for j in range(i + 1, 4):
            P.add_relation(i, j)
    C = order_complex(P)
    # the order complex of a total order is a full simplex
    assert C.maximal_simplices() == [(0, 1, 2, 3)]
    assert C.reduced_betti() == [0, 0, 0, 0]


def test_order_complex_of_antichain_pair():
    P = Poset()
    P.add_element(0, 0)
    P.add_element(1, 0)
    C = order_complex(P)
    assert C.reduced_betti() == [1]     # two points


def test_poset_cycle_detection():
    P = Poset()
    P.add_element(0, 0)
    P.add_element(1, 0)
    P.add_relation(0, 1)
    P.add_relation(1, 0)
    with pytest.raises(ValueError):
        P.close()


def test_euler_by_orbit_counting_exact():
    # one orbit of 6 vertices, one of 9 edges: a circle up to the signs
    chi = euler_by_orbit_counting({("v",): 3, ("v", "e"): 2}, 18)
    assert chi == -1 + 6 - 9
    with pytest.raises(ValueError):
        euler_by_orbit_counting({("v",): 5}, 18)
