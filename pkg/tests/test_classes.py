import numpy as np

from co3geo import permutation as pm
from co3geo.classes import centralizer_gens, class_size_only, enumerate_class
from co3geo.groups import Fingerprinter, PermGroup


def cyc(points, degree):
    out = np.arange(degree, dtype=pm.DTYPE)
    for a, b in zip(points, points[1:] + points[:1]):
        out[a] = b
    return out


def make_s5():
    return PermGroup([cyc([0, 1], 5), cyc([0, 1, 2, 3, 4], 5)], 5)


def test_transposition_class_of_s5():
    G = make_s5()
    fp = Fingerprinter(5)
    cls = enumerate_class(G.gens, cyc([0, 1], 5), fp)
    assert cls.size == 10
    # every member is an involution with exactly 3 fixed points
    for img in cls.images:
        assert pm.is_identity(pm.compose(img, img))
        assert int((img == np.arange(5)).sum()) == 3


def test_conjugator_words_are_correct():
    G = make_s5()
    fp = Fingerprinter(5)
    rep = cyc([0, 1, 2], 5)
    cls = enumerate_class(G.gens, rep, fp)
    assert cls.size == 20
    for i in range(cls.size):
        w = cls.conjugator(i)
        assert (pm.conjugate(rep, w) == cls.images[i]).all()


def test_class_size_only_matches_enumeration():
    G = make_s5()
    fp = Fingerprinter(5)
    rep = cyc([0, 1, 2, 3, 4], 5)
    n = class_size_only(G.gens, rep, fp)
    assert n == 24


def test_centralizer_generation():
    G = make_s5()
    fp = Fingerprinter(5)
    cls = enumerate_class(G.gens, cyc([0, 1], 5), fp)
    C = centralizer_gens(G, cls, seed=3)
    # |C| = |G| / class size
    assert C.order() == 120 // 10
    rep = cls.images[int(cls.index_of(cyc([0, 1], 5)))]
    for g in C.gens:
        assert pm.commutes(g, rep)
