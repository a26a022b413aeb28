import numpy as np
import pytest

from co3geo import permutation as pm


def random_perm(rng, n=12):
    return rng.permutation(n).astype(pm.DTYPE)


def test_compose_and_inverse():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p, q = random_perm(rng), random_perm(rng)
        pq = pm.compose(p, q)
        # compose applies p first: (p*q)(i) = q(p(i))
        for i in range(len(p)):
            assert pq[i] == q[p[i]]
        assert pm.is_identity(pm.compose(p, pm.inverse(p)))
        assert pm.is_identity(pm.compose(pm.inverse(p), p))


def test_conjugate_preserves_cycle_type():
    rng = np.random.default_rng(4)
    for _ in range(30):
        x, g = random_perm(rng), random_perm(rng)
        y = pm.conjugate(x, g)
        t1 = sorted(len(c) for c in pm.cycles(x))
        t2 = sorted(len(c) for c in pm.cycles(y))
        assert t1 == t2
        assert pm.perm_order(x) == pm.perm_order(y)


def test_conjugate_formula():
    rng = np.random.default_rng(5)
    x, g = random_perm(rng), random_perm(rng)
    y = pm.conjugate(x, g)
    want = pm.compose(pm.compose(pm.inverse(g), x), g)
    assert (y == want).all()


def test_batch_operations_match_scalar():
    rng = np.random.default_rng(6)
    batch = np.stack([random_perm(rng) for _ in range(7)])
    g = random_perm(rng)
    conj = pm.batch_conjugate(batch, g)
    inv = pm.batch_inverse(batch)
    for k in range(7):
        assert (conj[k] == pm.conjugate(batch[k], g)).all()
        assert (inv[k] == pm.inverse(batch[k])).all()


def test_commutes():
    rng = np.random.default_rng(7)
    p = random_perm(rng)
    assert pm.commutes(p, p)
    assert pm.commutes(p, pm.identity(len(p)))


def test_degree_mismatch_rejected():
    with pytest.raises(pm.DegreeMismatch):
        pm.compose(pm.identity(4), pm.identity(5))


def test_parse_generator_file(gens_path):
    degree, gens = pm.parse_generator_file(gens_path)
    assert degree == 276
    assert len(gens) >= 2
    for g in gens:
        assert sorted(g) == list(range(276))
