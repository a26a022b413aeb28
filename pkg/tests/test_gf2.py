"""GF(2) linear algebra against an independent dense oracle."""

import numpy as np

from co3geo import gf2
from co3geo.gf2 import BitMatrix, nullity, nullspace, rank


def dense(A: BitMatrix) -> np.ndarray:
    return np.array([[A.get(i, j) for j in range(A.ncols)]
                     for i in range(A.nrows)], dtype=np.int64)


def oracle_rank(M: np.ndarray) -> int:
    """Straightforward Gaussian elimination mod 2, row by row."""
    M = M.copy() % 2
    r = 0
    for c in range(M.shape[1]):
        pivot = None
        for i in range(r, M.shape[0]):
            if M[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        M[[r, pivot]] = M[[pivot, r]]
        for i in range(M.shape[0]):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
    return r


def random_bitmatrix(rng, nrows, ncols):
    rows = [int(rng.integers(0, 1 << ncols)) for _ in range(nrows)]
    return BitMatrix(nrows, ncols, rows)


def test_rank_matches_dense_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n, m = rng.integers(1, 9, size=2)
        A = random_bitmatrix(rng, int(n), int(m))
        assert rank(A) == oracle_rank(dense(A))


def test_rank_nullity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        A = random_bitmatrix(rng, 7, 9)
        assert rank(A) + nullity(A) == 9


def test_nullspace_vectors_are_killed():
    rng = np.random.default_rng(13)
    for _ in range(100):
        A = random_bitmatrix(rng, 6, 8)
        basis = nullspace(A)
        assert len(basis) == nullity(A)
        for v in basis:
            assert A.mul_vector(v) == 0
        # basis vectors are independent
        B = BitMatrix(len(basis), 8, basis)
        assert rank(B) == len(basis)


def test_matmul_matches_numpy():
    rng = np.random.default_rng(14)
    for _ in range(50):
        A = random_bitmatrix(rng, 5, 6)
        B = random_bitmatrix(rng, 6, 4)
        # rows act on column vectors from the left: (A @ B) x = A (B x)
        got = dense(A @ B)
        want = dense(A) @ dense(B) % 2
        assert (got == want).all()


def test_squarezero_rank2_census():
    mats = gf2.enumerate_rank2_squarezero()
    assert len(mats) == 10
    for N in mats:
        assert rank(N) == 2
        assert (N @ N).is_zero()
        # strictly upper triangular
        for i in range(4):
            for j in range(i + 1):
                assert N.get(i, j) == 0
    assert set(mats) == set(gf2.NILPOTENT_RANK2)


def test_unipotent_relations():
    report = gf2.u4_relations_check()
    assert report["ok"], report


def test_unipotents_are_involutions_with_rank2_fixed_space():
    for i in range(1, 11):
        u = gf2.unipotent(i)
        assert (u @ u) == gf2.I4
        assert len(gf2.fixed_space(u)) == 2
