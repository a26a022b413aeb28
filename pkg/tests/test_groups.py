"""Stabilizer chains, membership and element streaming on small groups."""

import numpy as np

from co3geo import permutation as pm
from co3geo.groups import PermGroup, StreamCapExceeded, closure_elements


def cyc(images, degree):
    out = np.arange(degree, dtype=pm.DTYPE)
    for a, b in zip(images, images[1:] + images[:1]):
        out[a] = b
    return out


def sym(n):
    return PermGroup([cyc([0, 1], n), cyc(list(range(n)), n)], n)


def test_symmetric_group_orders():
    import math
    for n in range(2, 8):
        assert sym(n).order() == math.factorial(n)


def test_membership_sifting():
    G = sym(5)
    rng = np.random.default_rng(1)
    stream = G.random_stream(99)
    for _ in range(20):
        assert G.contains(next(stream))
    A5_gens = [cyc([0, 1, 2], 5), cyc([0, 1, 2, 3, 4], 5)]
    A5 = PermGroup(A5_gens, 5)
    assert A5.order() == 60
    assert not A5.contains(cyc([0, 1], 5))
    assert A5.is_subgroup(G)


def test_closure_elements_matches_order():
    G = sym(4)
    elems = closure_elements(G.gens, 4)
    assert len(elems) == 24
    keys = {row.tobytes() for row in elems}
    assert len(keys) == 24


def test_element_stream_is_exhaustive():
    G = sym(4)
    seen = {row.tobytes() for row in G.elements()}
    assert len(seen) == 24
    try:
        list(sym(7).elements(cap=100))
        raised = False
    except StreamCapExceeded:
        raised = True
    assert raised


def test_random_stream_is_seed_reproducible():
    G = sym(6)
    s1 = G.random_stream(42)
    s2 = G.random_stream(42)
    seq1 = [next(s1).tobytes() for _ in range(10)]
    seq2 = [next(s2).tobytes() for _ in range(10)]
    assert seq1 == seq2
    s3 = G.random_stream(43)
    seq3 = [next(s3).tobytes() for _ in range(10)]
    assert seq3 != seq1
