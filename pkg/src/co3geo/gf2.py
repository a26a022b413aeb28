"""Linear algebra over GF(2) with rows packed into Python integers.

Each row of a matrix is one arbitrary-precision integer whose bit i is
the entry in column i.  Row reduction is then word-parallel XOR, which
is plenty for the boundary matrices (a few thousand columns) handled
here.
"""

from __future__ import annotations


class BitMatrix:
    """An (nrows x ncols) matrix over GF(2); rows are int bitsets."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = list(rows) if rows is not None else [0] * nrows
        assert len(self.rows) == nrows

    @classmethod
    def from_lists(cls, grid) -> "BitMatrix":
        rows = []
        ncols = len(grid[0]) if grid else 0
        for r in grid:
            assert len(r) == ncols
            rows.append(sum((int(v) & 1) << j for j, v in enumerate(r)))
        return cls(len(grid), ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, tuple(self.rows)))

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return BitMatrix(self.nrows, self.ncols,
                         [a ^ b for a, b in zip(self.rows, other.rows)])

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        assert self.ncols == other.nrows
        out = []
        for r in self.rows:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.rows[j]
                r >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, out)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(self.ncols, self.nrows, out)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def mul_vector(self, v: int) -> int:
        """Matrix times column vector (v a bitset of length ncols)."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & v).count("1") & 1:
                out |= 1 << i
        return out

    def __str__(self) -> str:
        return "\n".join(
            " ".join(str(self.get(i, j)) for j in range(self.ncols))
            for i in range(self.nrows))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def _echelon(rows: list[int]):
    """Row echelon form; returns (pivot_rows, pivot_columns)."""
    pivots = []
    piv_cols = []
    for r in rows:
        for pr, pc in zip(pivots, piv_cols):
            if (r >> pc) & 1:
                r ^= pr
        if r:
            pc = r.bit_length() - 1
            pivots.append(r)
            piv_cols.append(pc)
    return pivots, piv_cols


def rank(A: BitMatrix) -> int:
    return len(_echelon(A.rows)[0])


def nullspace(A: BitMatrix) -> list[int]:
    """Basis of {v : Av = 0}, each vector a bitset of length ncols."""
    n = A.ncols
    # eliminate on the transpose-augmented trick: track row combos of I_n
    # reduce columns: work with rows of [A^T | I]
    At = A.transpose()
    basis = []
    pivots: list[tuple[int, int]] = []  # (reduced row of A^T, pivot col)
    for i in range(n):
        r = At.rows[i]
        tag = 1 << i
        for pr, pc, ptag in pivots:
            if (r >> pc) & 1:
                r ^= pr
                tag ^= ptag
        if r == 0:
            basis.append(tag)
        else:
            pivots.append((r, r.bit_length() - 1, tag))
    return basis


def nullity(A: BitMatrix) -> int:
    return A.ncols - rank(A)


def betti_f2(boundaries: list[BitMatrix], dims: list[int] | None = None) -> list[int]:
    """Betti numbers of a chain complex given boundary maps.

    boundaries[k] is the map C_{k} -> C_{k-1} (shape n_{k-1} x n_k);
    boundaries[0] is the empty map from C_0, given as a 0 x n_0 matrix.
    Raises if some consecutive composition is nonzero.
    """
    for k in range(len(boundaries) - 1):
        if not (boundaries[k] @ boundaries[k + 1]).is_zero():
            raise ValueError(f"boundary maps at dims {k},{k+1} do not compose to zero")
    ranks = [rank(b) for b in boundaries]
    betti = []
    for k in range(len(boundaries)):
        nk = boundaries[k].ncols
        rk_next = ranks[k + 1] if k + 1 < len(boundaries) else 0
        betti.append(nk - ranks[k] - rk_next)
    return betti


def reduced_betti_f2(boundaries: list[BitMatrix]) -> list[int]:
    """Same as betti_f2 but with the empty simplex: beta~_0 = beta_0 - 1."""
    b = betti_f2(boundaries)
    if b:
        b[0] -= 1
    return b


# ---------------------------------------------------------------- 4x4 model

def _m4(grid) -> BitMatrix:
    return BitMatrix.from_lists(grid)


# The ten strictly upper triangular 4x4 matrices N over GF(2) with
# N^2 = 0 and rank(N) = 2, in the fixed reference order used throughout
# the package.  I + N_i are exactly the non-transvection involutions of
# the upper unitriangular group U4; matrices act on column vectors from
# the left.
NILPOTENT_RANK2 = [
    _m4([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 1
    _m4([[0, 0, 1, 1], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 2
    _m4([[0, 0, 0, 1], [0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 3
    _m4([[0, 0, 0, 1], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 4
    _m4([[0, 0, 1, 1], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 5
    _m4([[0, 0, 1, 0], [0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),   # 6
    _m4([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]),   # 7
    _m4([[0, 1, 0, 1], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]),   # 8
    _m4([[0, 1, 1, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0]]),   # 9
    _m4([[0, 1, 1, 1], [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0]]),   # 10
]

I4 = BitMatrix.identity(4)


def unipotent(i: int) -> BitMatrix:
    """I + N_i, 1-based index into NILPOTENT_RANK2."""
    return I4 + NILPOTENT_RANK2[i - 1]


def enumerate_rank2_squarezero() -> list[BitMatrix]:
    """All strictly upper triangular 4x4 N over GF(2), N^2=0, rank 2."""
    positions = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    out = []
    for mask in range(64):
        rows = [0, 0, 0, 0]
        for b, (i, j) in enumerate(positions):
            if mask >> b & 1:
                rows[i] |= 1 << j
        N = BitMatrix(4, 4, rows)
        if rank(N) == 2 and (N @ N).is_zero():
            out.append(N)
    return out


def fixed_space(U: BitMatrix) -> list[int]:
    """Basis of the fixed space of a unipotent U (= nullspace of U + I)."""
    return nullspace(U + BitMatrix.identity(U.nrows))


def span_f2(vectors) -> set[int]:
    """All GF(2) combinations of the given bitset vectors."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def u4_relations_check() -> dict:
    """Structural facts about the ten unipotent involutions of U4.

    Checks the product relations among the z_i = I + N_i, and that the
    fixed space of each z_i is the expected 2-dimensional subspace
    (e-vectors as bitsets: e1=1, e2=2, e3=4, e4=8).
    """
    z = [None] + [unipotent(i) for i in range(1, 11)]
    report = {
        "z3_eq_z1z2": z[3] == z[1] @ z[2] == z[2] @ z[1],
        "z6_eq_z4z5": z[6] == z[4] @ z[5] == z[5] @ z[4],
        "z9_eq_z1z8_eq_z5z7": z[9] == z[1] @ z[8] == z[5] @ z[7],
        "z10_eq_z1z7_eq_z5z8": z[10] == z[1] @ z[7] == z[5] @ z[8],
        "all_involutions": all((z[i] @ z[i]) == I4 for i in range(1, 11)),
    }
    e1, e2, e3, e4 = 1, 2, 4, 8
    expected_fixed = {i: span_f2([e1, e2]) for i in range(1, 7)}
    expected_fixed.update({7: span_f2([e1, e3]), 8: span_f2([e1, e3]),
                           9: span_f2([e1, e2 ^ e3]), 10: span_f2([e1, e2 ^ e3])})
    for i in range(1, 11):
        got = span_f2(fixed_space(unipotent(i)))
        report[f"fixed_space_z{i}"] = got == expected_fixed[i]
    report["ok"] = all(report.values())
    return report
