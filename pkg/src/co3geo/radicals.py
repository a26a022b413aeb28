"""Brute-force p-subgroup collections for small groups.

Everything here assumes the whole group fits in memory as explicit
elements (default cap 10^6).  Subgroups are represented by frozensets
of element byte-strings; this makes conjugation, intersection and
inclusion tests one-liners and is fast enough for the regression corpus
(S4, S5, GL(3,2) and friends).
"""

from __future__ import annotations

import numpy as np

from . import permutation as pm
from .complexes import Poset, order_complex
from .groups import PermGroup, closure_elements


def _key(img: np.ndarray) -> bytes:
    return np.ascontiguousarray(img, dtype=pm.DTYPE).tobytes()


class SmallGroup:
    """A group small enough to hold all elements explicitly."""

    def __init__(self, gens, degree: int, cap: int = 1_000_000):
        self.degree = degree
        self.gens = [np.asarray(g, dtype=pm.DTYPE) for g in gens]
        self.elements = closure_elements(self.gens, degree, cap=cap)
        self.order = len(self.elements)
        self._by_key = {_key(x): x for x in self.elements}

    def element_from_key(self, k: bytes) -> np.ndarray:
        return self._by_key[k]

    def centralizer_keys(self, subgroup_keys: frozenset) -> frozenset:
        sub = [self._by_key[k] for k in subgroup_keys]
        out = []
        for x in self.elements:
            if all(pm.commutes(x, s) for s in sub):
                out.append(_key(x))
        return frozenset(out)

    def normalizer_keys(self, subgroup_keys: frozenset) -> list[np.ndarray]:
        out = []
        for g in self.elements:
            ginv = pm.inverse(g)
            if all(_key(g[self._by_key[k][ginv]]) in subgroup_keys
                   for k in subgroup_keys):
                out.append(g)
        return out

    def conjugate_subgroup(self, keys: frozenset, g: np.ndarray) -> frozenset:
        ginv = pm.inverse(g)
        return frozenset(_key(g[self._by_key[k][ginv]]) for k in keys)

    def subgroup_orbit(self, keys: frozenset) -> list[frozenset]:
        """All G-conjugates of a subgroup (BFS over generators)."""
        seen = {keys}
        frontier = [keys]
        while frontier:
            nxt = []
            for s in frontier:
                for g in self.gens:
                    img = self.conjugate_subgroup(s, g)
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return sorted(seen, key=sorted)


def subgroup_closure_keys(group: SmallGroup, gens_keys) -> frozenset:
    elems = [group.element_from_key(k) for k in gens_keys]
    sub = closure_elements(elems + [pm.identity(group.degree)], group.degree)
    return frozenset(_key(x) for x in sub)


def sylow_subgroup(group: SmallGroup, p: int) -> frozenset:
    """A Sylow p-subgroup, by normalizer climbing over explicit elements."""
    target = 1
    n = group.order
    while n % p == 0:
        target *= p
        n //= p
    P = frozenset([_key(pm.identity(group.degree))])
    while len(P) < target:
        # find a p-element of N_G(P) outside P; one exists while P is not Sylow
        grown = False
        for g in group.normalizer_keys(P):
            k = _key(g)
            if k in P:
                continue
            o = pm.perm_order(g)
            # take the p-part of g
            q = o
            while q % p == 0:
                q //= p
            h = _power(g, q)
            if _key(h) in P or pm.is_identity(h):
                continue
            cand = subgroup_closure_keys(group, P | {_key(h)})
            if len(cand) % p == 0 and _is_p_power(len(cand), p):
                P = cand
                grown = True
                break
        if not grown:
            raise RuntimeError("Sylow climb stalled")
    return P


def _power(g: np.ndarray, k: int) -> np.ndarray:
    r = pm.identity(len(g))
    while k:
        if k & 1:
            r = pm.compose(r, g)
        g = pm.compose(g, g)
        k >>= 1
    return r


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def subgroups_of_p_group(group: SmallGroup, sylow: frozenset) -> list[frozenset]:
    """All subgroups of a p-group given by its element keys."""
    elems = sorted(sylow)
    found = {frozenset([_key(pm.identity(group.degree))])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for k in elems:
                if k in H:
                    continue
                cand = subgroup_closure_keys(group, H | {k})
                if cand not in found:
                    found.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


class SubgroupRecord:
    def __init__(self, group: SmallGroup, keys: frozenset, class_id: int):
        self.keys = keys
        self.order = len(keys)
        self.class_id = class_id
        elems = [group.element_from_key(k) for k in keys]
        center = [x for x in elems
                  if all(pm.commutes(x, y) for y in elems)]
        self.center_keys = frozenset(_key(x) for x in center)
        self.is_elementary_abelian = (
            len(center) == len(elems)
            and all(pm.is_identity(pm.compose(x, x)) for x in elems))
        self.is_radical = False
        self.is_centric = False
        self.is_distinguished = False

    def __repr__(self):
        flags = "".join(f for f, b in
                        (("R", self.is_radical), ("C", self.is_centric),
                         ("D", self.is_distinguished), ("E", self.is_elementary_abelian)) if b)
        return f"SubgroupRecord(order={self.order}, class={self.class_id}, {flags})"


def p_core_keys(group: SmallGroup, normalizer_elems: list[np.ndarray], p: int) -> frozenset:
    """O_p of the subgroup given by explicit elements.

    Computed as the intersection of all conjugates of one Sylow
    p-subgroup of that subgroup.
    """
    N = SmallGroup(normalizer_elems, group.degree)
    P = sylow_subgroup(N, p)
    core = set(P)
    for g in N.elements:
        core &= N.conjugate_subgroup(P, g)
        if len(core) == 1:
            break
    return frozenset(core)


def p_subgroups(group: SmallGroup, p: int) -> list[SubgroupRecord]:
    """Nontrivial p-subgroups up to conjugacy, with flags filled in.

    Every p-subgroup conjugates into a fixed Sylow, so enumerating the
    Sylow's subgroups and fusing under G covers all classes.
    """
    S = sylow_subgroup(group, p)
    subs = [H for H in subgroups_of_p_group(group, S) if len(H) > 1]
    # fuse conjugates
    class_reps: list[frozenset] = []
    seen: set[frozenset] = set()
    for H in subs:
        if H in seen:
            continue
        orbit = group.subgroup_orbit(H)
        seen.update(o for o in orbit if o in set(subs))
        class_reps.append(H)

    # distinguished test data: all G-conjugates of nontrivial Z(S) elements
    ZS = _center_of(group, S)
    central_pool: set[bytes] = set()
    for k in ZS:
        x = group.element_from_key(k)
        if pm.is_identity(x):
            continue
        orbit = {k}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in group.gens:
                    img = pm.conjugate(y, g)
                    ik = _key(img)
                    if ik not in orbit:
                        orbit.add(ik)
                        nxt.append(img)
            frontier = nxt
        central_pool |= orbit

    records = []
    for cid, H in enumerate(class_reps):
        rec = SubgroupRecord(group, H, cid)
        nor = group.normalizer_keys(H)
        rec.normalizer_order = len(nor)
        core = p_core_keys(group, nor, p)
        rec.is_radical = core == H
        cent = group.centralizer_keys(H)
        rec.centralizer_order = len(cent)
        # centric: Z(H) is a Sylow p-subgroup of C_G(H)
        rec.is_centric = (len(cent) // len(rec.center_keys)) % p != 0
        rec.is_distinguished = any(k in central_pool for k in rec.center_keys
                                   if not pm.is_identity(group.element_from_key(k)))
        records.append(rec)
    return records


def _center_of(group: SmallGroup, keys: frozenset) -> frozenset:
    elems = [group.element_from_key(k) for k in keys]
    return frozenset(_key(x) for x in elems
                     if all(pm.commutes(x, y) for y in elems))


def _collection_poset(group: SmallGroup, reps: list[frozenset], tags: list) -> Poset:
    """Poset of all conjugates of the given subgroup representatives."""
    all_subs: list[tuple[frozenset, object]] = []
    seen = set()
    for H, tag in zip(reps, tags):
        for o in group.subgroup_orbit(H):
            if o not in seen:
                seen.add(o)
                all_subs.append((o, tag))
    all_subs.sort(key=lambda t: (len(t[0]), sorted(t[0])))
    P = Poset()
    for i, (H, tag) in enumerate(all_subs):
        P.add_element(i, tag)
    for i, (H, _) in enumerate(all_subs):
        for j, (K, _) in enumerate(all_subs):
            if len(H) < len(K) and H < K:
                P.add_relation(i, j)
    P.subgroups = [H for H, _ in all_subs]
    return P


def bouc_poset(group: SmallGroup, p: int, records=None) -> Poset:
    records = records if records is not None else p_subgroups(group, p)
    reps = [r.keys for r in records if r.is_radical]
    return _collection_poset(group, reps, [f"radical:{len(k)}" for k in reps])


def quillen_poset(group: SmallGroup, p: int, records=None) -> Poset:
    records = records if records is not None else p_subgroups(group, p)
    reps = [r.keys for r in records if r.is_elementary_abelian]
    return _collection_poset(group, reps, [f"elab:{len(k)}" for k in reps])


def distinguished_poset(group: SmallGroup, p: int, records=None) -> Poset:
    records = records if records is not None else p_subgroups(group, p)
    reps = [r.keys for r in records if r.is_radical and r.is_distinguished]
    return _collection_poset(group, reps, [f"dist:{len(k)}" for k in reps])


def benson_closure(group: SmallGroup, p: int) -> dict:
    """Closure of Sylow-central order-p elements under conjugation and
    commuting products; returns the element set and the rank spectrum of
    the elementary abelian subgroups it generates."""
    S = sylow_subgroup(group, p)
    ZS = _center_of(group, S)
    pool = {k for k in ZS
            if pm.perm_order(group.element_from_key(k)) == p}
    changed = True
    while changed:
        changed = False
        for k in list(pool):
            x = group.element_from_key(k)
            for g in group.gens:
                ik = _key(pm.conjugate(x, g))
                if ik not in pool:
                    pool.add(ik)
                    changed = True
        for k1 in list(pool):
            x = group.element_from_key(k1)
            for k2 in list(pool):
                y = group.element_from_key(k2)
                if k1 < k2 and pm.commutes(x, y):
                    z = pm.compose(x, y)
                    zk = _key(z)
                    if pm.perm_order(z) == p and zk not in pool:
                        pool.add(zk)
                        changed = True
    # rank spectrum: elementary abelian subgroups all of whose nontrivial
    # elements lie in the pool
    ranks = set()
    for rec in p_subgroups(group, p):
        if not rec.is_elementary_abelian:
            continue
        for H in group.subgroup_orbit(rec.keys):
            nontriv = {k for k in H
                       if not pm.is_identity(group.element_from_key(k))}
            if nontriv and nontriv <= pool:
                ranks.add(len(H).bit_length() - 1)
                break
    return {"elements": frozenset(pool), "rank_spectrum": sorted(ranks)}


def homotopy_compare(P1: Poset, P2: Poset) -> dict:
    """F2 Betti vectors and reduced Euler characteristics of two order
    complexes; equality is evidence for (not proof of) homotopy
    equivalence and is labeled as such by the caller."""
    C1, C2 = order_complex(P1), order_complex(P2)
    b1, b2 = C1.reduced_betti(), C2.reduced_betti()
    L = max(len(b1), len(b2))
    b1 = b1 + [0] * (L - len(b1))
    b2 = b2 + [0] * (L - len(b2))
    return {
        "betti_1": b1, "betti_2": b2,
        "euler_1": C1.euler_reduced(), "euler_2": C2.euler_reduced(),
        "equal": b1 == b2,
    }
