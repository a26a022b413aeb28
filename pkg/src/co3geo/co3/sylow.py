"""Sylow 2-subgroup of the degree-276 group and its coordinate model.

The Sylow subgroup S (order 2^10) is built by 2-subgroup climbing inside
the centralizer of a central involution z.  S contains 55 central
involutions; the unique normal pure central 2^4 subgroup M is the kernel
of the conjugation action of S on itself, and a flag-adapted basis
(a1 = z, a2, a3, a4) of M turns S/M into the full group of 4x4 upper
unitriangular matrices over F2 acting on column vectors.  The ten
rank-two square-zero nilpotents N_i then label the central involutions
outside M: each unipotent I + N_i is hit by exactly four of them (one
coset of the line L = <a1, a2>).
"""

from __future__ import annotations

import numpy as np

from .. import permutation as pm
from ..gf2 import NILPOTENT_RANK2, BitMatrix, nullspace, span_f2
from ..groups import PermGroup, closure_elements, normalizer_by_stream
from .context import Co3Context, perm_power

SYLOW_ORDER = 1024
CENTRAL_COUNT = 55


class SylowModelError(RuntimeError):
    pass


def _two_part(g: np.ndarray) -> np.ndarray:
    """The 2-element g^(odd part of order(g))."""
    o = pm.perm_order(g)
    while o % 2 == 0:
        o //= 2
    return perm_power(g, o)


def climb_sylow2(ctx: Co3Context, *, seed: int | None = None,
                 max_samples: int = 500) -> PermGroup:
    """A Sylow 2-subgroup of the full group, as a subgroup of C(z).

    The 2-part of |C(z)| equals the 2-part of |G|, so climbing inside
    C(z) suffices: starting from <z>, repeatedly adjoin a 2-element of
    the normalizer (z itself is central, so the first normalizer is all
    of C(z); later ones are computed by streaming).
    """
    if seed is None:
        seed = ctx.seed
    Cz = ctx.centralizer_z
    P = PermGroup([ctx.z], ctx.degree)
    step = 0
    while P.order() < SYLOW_ORDER:
        N = Cz if P.order() == 2 else normalizer_by_stream(Cz, P, fpr=ctx.fp)
        stream = N.random_stream(seed + step)
        for _ in range(max_samples):
            h = _two_part(next(stream))
            if pm.is_identity(h) or P.contains(h):
                continue
            P = PermGroup(P.gens + [h], ctx.degree)
            break
        else:
            raise SylowModelError(f"climb stalled at order {P.order()}")
        step += 1
    if P.order() != SYLOW_ORDER:
        raise SylowModelError(f"overshot 2-group order: {P.order()}")
    return P


def pure_central_subgroups(comm: np.ndarray, prod: np.ndarray) -> list[frozenset]:
    """All elementary abelian subgroups inside a set of central involutions.

    comm[i,j]: involutions i, j commute; prod[i,j]: index of their
    product within the same set, or -1 when the product falls outside.
    A subgroup is encoded as the frozenset of its non-identity indices.
    """
    n = len(comm)
    found: set[frozenset] = {frozenset([i]) for i in range(n)}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for j in range(n):
                if j in H:
                    continue
                if all(comm[i, j] and prod[i, j] >= 0 for i in H):
                    cand = frozenset(H | {j} | {int(prod[i, j]) for i in H})
                    if cand not in found:
                        found.add(cand)
                        nxt.append(cand)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def maximal_members(sets: list[frozenset]) -> list[frozenset]:
    return [s for s in sets
            if not any(s < t for t in sets)]


def _nilpotent_key(N: BitMatrix) -> int:
    """Pack the strict upper triangle (x12,x13,x14,x23,x24,x34) into 6 bits."""
    bits = [N.get(0, 1), N.get(0, 2), N.get(0, 3),
            N.get(1, 2), N.get(1, 3), N.get(2, 3)]
    return sum(b << k for k, b in enumerate(bits))


def unitriangular_keys() -> list[int]:
    return list(range(64))


class SylowModel:
    """S together with its labeled central involutions and quotient map."""

    def __init__(self, ctx: Co3Context, S: PermGroup | None = None, *,
                 seed: int | None = None):
        self.ctx = ctx
        self.S = S if S is not None else climb_sylow2(ctx, seed=seed)
        if self.S.order() != SYLOW_ORDER:
            raise SylowModelError(f"|S| = {self.S.order()}, expected {SYLOW_ORDER}")
        self.elements = closure_elements(self.S.gens, ctx.degree, cap=SYLOW_ORDER + 1)
        order = np.lexsort(self.elements.T[::-1])
        self.elements = self.elements[order]
        self.el_index = {row.tobytes(): i for i, row in enumerate(self.elements)}
        self._el_inv = pm.batch_inverse(self.elements)

        mask = ctx.central_mask(self.elements)
        self.central_el_idx = np.flatnonzero(mask)
        self.centrals = self.elements[self.central_el_idx]
        if len(self.centrals) != CENTRAL_COUNT:
            raise SylowModelError(f"{len(self.centrals)} central involutions, "
                                  f"expected {CENTRAL_COUNT}")
        self._central_fps = ctx.fp.batch(self.centrals)
        self._central_by_fp = {int(f): i for i, f in enumerate(self._central_fps)}

        self._build_tables()
        self._find_m_spaces()
        self._fit_basis()
        self._fit_quotient()
        self._label_lifts()

    # -- bookkeeping on the 55 central involutions -----------------------

    def _build_tables(self):
        n = CENTRAL_COUNT
        self.comm = np.zeros((n, n), dtype=bool)
        self.prod = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                if pm.commutes(self.centrals[i], self.centrals[j]):
                    self.comm[i, j] = self.comm[j, i] = True
                    p = pm.compose(self.centrals[i], self.centrals[j])
                    k = self._central_by_fp.get(int(self.ctx.fp.one(p)))
                    if k is not None:
                        self.prod[i, j] = self.prod[j, i] = k
        self.pure_subgroups = pure_central_subgroups(self.comm, self.prod)
        self.maximal_pure = maximal_members(self.pure_subgroups)
        ranks = {len(s).bit_length() for s in self.pure_subgroups}
        if max(ranks) > 4:
            raise SylowModelError("pure central subgroup of rank > 4 found")
        self.rank_spectrum = sorted(ranks)

    def central_index(self, img: np.ndarray) -> int | None:
        return self._central_by_fp.get(int(self.ctx.fp.one(img)))

    def span(self, idxs) -> frozenset:
        """Subgroup of the central-involution set generated by the given ones."""
        cur = set()
        for j in idxs:
            if j in cur:
                continue
            add = {j} | {int(self.prod[i, j]) for i in cur}
            if -1 in add or any(not self.comm[i, j] for i in cur):
                raise SylowModelError("span escapes the pure central set")
            cur |= add
        return frozenset(cur)

    # -- the normal M and the flag basis ---------------------------------

    def _conj_action_on_centrals(self, g: np.ndarray) -> np.ndarray:
        conj = pm.batch_conjugate(self.centrals, g)
        out = np.empty(CENTRAL_COUNT, dtype=np.int64)
        for i, f in enumerate(self.ctx.fp.batch(conj)):
            k = self._central_by_fp.get(int(f))
            if k is None:
                raise SylowModelError("conjugation leaves the central set of S")
            out[i] = k
        return out

    def _find_m_spaces(self):
        self.gen_actions = [self._conj_action_on_centrals(g) for g in self.S.gens]
        rank4 = [s for s in self.maximal_pure if len(s) == 15]
        normal = [s for s in rank4
                  if all(frozenset(int(a[i]) for i in s) == s
                         for a in self.gen_actions)]
        if len(normal) != 1:
            raise SylowModelError(f"{len(normal)} normal pure central 2^4 subgroups")
        self.M = normal[0]
        self.rank4 = rank4

    def _fit_basis(self):
        z_idx = self.central_index(self.ctx.z)
        if z_idx is None or z_idx not in self.M:
            raise SylowModelError("z is not a central involution of M")
        fixed = [i for i in self.M
                 if all(int(a[i]) == i for a in self.gen_actions)]
        if fixed != [z_idx]:
            raise SylowModelError(f"fixed points of S on M: {fixed}")
        self.a1 = z_idx

        def stage(allowed: frozenset) -> list[int]:
            ok = []
            for i in self.M:
                good = True
                for a in self.gen_actions:
                    j = int(a[i])
                    if j != i and int(self.prod[i, j]) not in allowed:
                        good = False
                        break
                if good:
                    ok.append(i)
            return ok

        v1 = frozenset([z_idx])
        v2 = stage(v1)
        two = [i for i in v2 if i != z_idx]
        if len(two) != 2:
            raise SylowModelError("second flag step is not a line")
        self.a2 = min(two, key=lambda i: self.centrals[i].tobytes())
        self.L = self.span([self.a1, self.a2])
        v3 = stage(self.L)
        rest = [i for i in v3 if i not in self.L]
        if len(rest) != 4:
            raise SylowModelError("third flag step is not a plane")
        self.a3 = min(rest, key=lambda i: self.centrals[i].tobytes())
        self.box = self.span([self.a1, self.a2, self.a3])
        last = [i for i in self.M if i not in self.box]
        self.a4 = min(last, key=lambda i: self.centrals[i].tobytes())

        # coordinates of M in the basis (a1..a4)
        basis_rows = [self.centrals[i] for i in (self.a1, self.a2, self.a3, self.a4)]
        self.coords: dict[bytes, tuple] = {}
        for v in range(16):
            img = pm.identity(self.ctx.degree)
            vec = ((v >> 0) & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1)
            for bit, row in zip(vec, basis_rows):
                if bit:
                    img = pm.compose(img, row)
            self.coords[img.tobytes()] = vec
        if len(self.coords) != 16:
            raise SylowModelError("basis of M is degenerate")
        self._m_row_by_bits = {
            (v[0] | v[1] << 1 | v[2] << 2 | v[3] << 3): key
            for key, v in self.coords.items()}

    # -- the unitriangular quotient --------------------------------------

    def _fit_quotient(self):
        cols = []
        for a in (self.a2, self.a3, self.a4):
            conj = pm.batch_conjugate_by_rows(self.centrals[a], self.elements,
                                              self._el_inv)
            cols.append([self.coords.get(row.tobytes()) for row in conj])
        keys = np.empty(SYLOW_ORDER, dtype=np.int64)
        for s in range(SYLOW_ORDER):
            c2, c3, c4 = cols[0][s], cols[1][s], cols[2][s]
            if c2 is None or c3 is None or c4 is None:
                raise SylowModelError("conjugation does not preserve M")
            if not (c2[1] == 1 and c2[2] == 0 and c2[3] == 0
                    and c3[2] == 1 and c3[3] == 0 and c4[3] == 1):
                raise SylowModelError("action is not unitriangular in the flag basis")
            x12, x13, x23, x14, x24, x34 = (c2[0], c3[0], c3[1],
                                            c4[0], c4[1], c4[2])
            keys[s] = (x12 | (x13 << 1) | (x14 << 2)
                       | (x23 << 3) | (x24 << 4) | (x34 << 5))
        self.u4_keys = keys
        if len(set(keys.tolist())) != 64:
            raise SylowModelError("quotient image is not all of the unitriangular group")
        kernel = np.flatnonzero(keys == 0)
        m_el = {int(self.central_el_idx[i]) for i in self.M}
        m_el.add(self.el_index[pm.identity(self.ctx.degree).tobytes()])
        if set(kernel.tolist()) != m_el:
            raise SylowModelError("kernel of the quotient map is not M")

    def u4_key(self, img: np.ndarray) -> int:
        return int(self.u4_keys[self.el_index[img.tobytes()]])

    def preimage_elements(self, keys) -> np.ndarray:
        """All elements of S whose quotient key lies in the given set."""
        keyset = set(int(k) for k in keys)
        mask = np.fromiter((int(k) in keyset for k in self.u4_keys),
                           dtype=bool, count=SYLOW_ORDER)
        return self.elements[mask]

    # -- labeled lifts ----------------------------------------------------

    def _label_lifts(self):
        self.nilpotent_keys = [_nilpotent_key(N) for N in NILPOTENT_RANK2]
        central_keys = self.u4_keys[self.central_el_idx]
        self.lift_cosets: list[list[int]] = []
        self.lifts: list[int] = []  # central index of the chosen z_i
        for key, N in zip(self.nilpotent_keys, NILPOTENT_RANK2):
            # the preimages of one unipotent form a coset of its fixed line
            fixed_rows = {self._m_row_by_bits[v]
                          for v in span_f2(nullspace(N)) if v}
            coset = [i for i in range(CENTRAL_COUNT)
                     if int(central_keys[i]) == key]
            if len(coset) != 4:
                raise SylowModelError(
                    f"{len(coset)} central involutions over one unipotent, expected 4")
            pick = min(coset, key=lambda i: self.centrals[i].tobytes())
            # the four preimages must form one coset of L
            for i in coset:
                d = pm.compose(self.centrals[pick], self.centrals[i])
                if not (pm.is_identity(d) or d.tobytes() in fixed_rows):
                    raise SylowModelError(
                        "preimages of a unipotent are not a coset of its fixed line")
            self.lift_cosets.append(coset)
            self.lifts.append(pick)
        outside = [i for i in range(CENTRAL_COUNT) if i not in self.M]
        if sorted(sum(self.lift_cosets, [])) != sorted(outside):
            raise SylowModelError("lift cosets do not cover the non-M centrals")
        self._refine_lifts()

        # the three rank-4 pure centrals through L, in the labeling
        # M1 = M, M2 = <L, lift1, lift2>, M3 = <L, lift4, lift5>
        self.M1 = self.M
        self.M2 = self.span([self.a1, self.a2, self.lifts[0], self.lifts[1]])
        self.M3 = self.span([self.a1, self.a2, self.lifts[3], self.lifts[4]])
        for name, m in (("M2", self.M2), ("M3", self.M3)):
            if len(m) != 15 or m not in set(self.rank4):
                raise SylowModelError(f"{name} is not a rank-4 pure central subgroup")
        self.line_structure = self.M1 | self.M2 | self.M3

    def _refine_lifts(self):
        """Interlock the representatives of the lift cosets.

        Within its coset any representative works for most statements,
        but the planes spanned by lifts from different cosets (whose
        fixed lines differ) only close up for compatible choices.  A
        small search over the cosets of the 1st, 5th, 7th and 8th lifts
        finds a deterministic compatible selection.
        """
        def plane_ok(x, y):
            try:
                return len(self.span([self.a1, x, y])) == 7
            except SylowModelError:
                return False

        c = self.lift_cosets
        for w1 in sorted(c[0]):
            for w5 in sorted(c[4]):
                for w7 in sorted(c[6]):
                    if not (plane_ok(w1, w7) and plane_ok(w5, w7)):
                        continue
                    for w8 in sorted(c[7]):
                        if not (plane_ok(w1, w8) and plane_ok(w5, w8)):
                            continue
                        mixed = ((self.mult(self.a2, w1), self.mult(self.a3, w7)),
                                 (self.mult(self.a2, w1), self.mult(self.a3, w8)),
                                 (self.mult(self.a2, w5), self.mult(self.a3, w7)),
                                 (self.mult(self.a2, w5), self.mult(self.a3, w8)))
                        if all(plane_ok(x, y) for x, y in mixed):
                            self.lifts[0], self.lifts[4] = w1, w5
                            self.lifts[6], self.lifts[7] = w7, w8
                            return
        raise SylowModelError("no compatible representatives for the lift cosets")

    # -- convenience -------------------------------------------------------

    def rows(self, idxs) -> np.ndarray:
        return self.centrals[sorted(idxs)]

    def subgroup_rows(self, idxs) -> np.ndarray:
        """Element rows of the subgroup {identity} + the given centrals."""
        out = [pm.identity(self.ctx.degree)]
        out.extend(self.centrals[i] for i in sorted(idxs))
        return np.stack(out)

    def mult(self, i: int, j: int) -> int:
        k = int(self.prod[i, j])
        if k < 0:
            raise SylowModelError("product outside the central set")
        return k
