"""Permutation groups: stabilizer chains, streaming, normalizers.

The stabilizer chain is built with the deterministic Schreier-Sims
algorithm.  Orbit transversals are kept as full image arrays (degree is
small), which makes sifting and coset streaming cheap.
"""

from __future__ import annotations

import numpy as np

from . import permutation as pm
from .permutation import DTYPE, DegreeMismatch

DEFAULT_STREAM_CAP = 2**24


class StreamCapExceeded(RuntimeError):
    def __init__(self, order, cap):
        super().__init__(f"group order {order} exceeds streaming cap {cap}")
        self.order = order
        self.cap = cap


class Fingerprinter:
    """Order-64 hash of image arrays via a random lookup table.

    A single instance is shared per context so fingerprints are
    comparable across all element sets of one group.
    """

    def __init__(self, degree: int, seed: int = 0x5EED):
        rng = np.random.Generator(np.random.PCG64(seed))
        self.degree = degree
        self.table = rng.integers(0, 2**64, size=(degree, degree), dtype=np.uint64)
        self._rowsel = np.arange(degree)

    def one(self, img: np.ndarray) -> int:
        return int(self.table[self._rowsel, img].sum(dtype=np.uint64))

    def batch(self, batch: np.ndarray) -> np.ndarray:
        return self.table[self._rowsel[None, :], batch].sum(axis=1, dtype=np.uint64)


class _Level:
    __slots__ = ("point", "gens", "transversal", "inv_transversal", "order_hint")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        self.transversal: dict[int, np.ndarray] = {point: pm.identity(degree)}
        self.inv_transversal: dict[int, np.ndarray] = {point: pm.identity(degree)}

    def rebuild_orbit(self) -> None:
        queue = list(self.transversal.keys())
        i = 0
        while i < len(queue):
            x = queue[i]
            i += 1
            ux = self.transversal[x]
            for g in self.gens:
                y = int(g[x])
                if y not in self.transversal:
                    uy = pm.compose(ux, g)
                    self.transversal[y] = uy
                    self.inv_transversal[y] = pm.inverse(uy)
                    queue.append(y)


class StabilizerChain:
    """Base and strong generating set with explicit transversals."""

    def __init__(self, generators, degree: int | None = None):
        gens = [np.asarray(g, dtype=DTYPE) for g in generators]
        if not gens:
            if degree is None:
                raise ValueError("need generators or an explicit degree")
            gens = []
        if degree is None:
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise DegreeMismatch("generators have mixed degrees")
        self.degree = degree
        self.levels: list[_Level] = []
        for g in gens:
            if not pm.is_identity(g):
                self._add_strong_gen(g, 0)
        self._verify()

    # -- construction -------------------------------------------------

    def _choose_base_point(self, g: np.ndarray) -> int:
        # largest cycle of the incoming generator: short chains on big orbits
        best, best_len = None, 0
        for cyc in pm.cycles(g):
            if len(cyc) > best_len:
                best, best_len = min(cyc), len(cyc)
        return best

    def _add_strong_gen(self, g: np.ndarray, depth: int) -> None:
        while len(self.levels) <= depth:
            self.levels.append(_Level(self._choose_base_point(g), self.degree))
        lvl = self.levels[depth]
        lvl.gens.append(g)
        lvl.rebuild_orbit()

    def sift(self, img: np.ndarray, start: int = 0):
        """Reduce img through the chain; return (residue, depth reached)."""
        g = img
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            x = int(g[lvl.point])
            if x not in lvl.transversal:
                return g, i
            g = pm.compose(g, lvl.inv_transversal[x])
        return g, len(self.levels)

    def _verify(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            fail = self._verify_level(i)
            if fail is None:
                i -= 1
            else:
                residue, depth = fail
                for j in range(i + 1, depth + 1):
                    self._add_strong_gen(residue, j)
                i = depth
        # levels created with no surviving generators would be inconsistent;
        # they cannot occur because residues are non-identity when added

    def _verify_level(self, i: int):
        lvl = self.levels[i]
        pts = list(lvl.transversal.keys())
        for x in pts:
            ux = lvl.transversal[x]
            for s in lvl.gens:
                y = int(s[x])
                schreier = pm.compose(pm.compose(ux, s), lvl.inv_transversal[y])
                if pm.is_identity(schreier):
                    continue
                residue, depth = self.sift(schreier, i + 1)
                if not pm.is_identity(residue):
                    return residue, depth
        return None

    # -- queries ------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lvl.point for lvl in self.levels]

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.transversal)
        return n

    def contains(self, img: np.ndarray) -> bool:
        if len(img) != self.degree:
            return False
        residue, _ = self.sift(np.asarray(img, dtype=DTYPE))
        return pm.is_identity(residue)

    def coset_decompose(self, img: np.ndarray):
        """Factor img as u_k * ... * u_1 over the chain transversals."""
        g = img
        word = []
        for lvl in self.levels:
            x = int(g[lvl.point])
            if x not in lvl.transversal:
                raise ValueError("element not in group")
            word.append(lvl.transversal[x])
            g = pm.compose(g, lvl.inv_transversal[x])
        if not pm.is_identity(g):
            raise ValueError("element not in group")
        return word


class PermGroup:
    """A permutation group given by generators, with a lazy chain."""

    def __init__(self, generators, degree: int | None = None):
        self.gens = [np.asarray(g, dtype=DTYPE) for g in generators]
        if degree is None:
            if not self.gens:
                raise ValueError("need generators or degree")
            degree = len(self.gens[0])
        self.degree = degree
        for g in self.gens:
            if len(g) != degree:
                raise DegreeMismatch("generators have mixed degrees")
        self._chain: StabilizerChain | None = None

    @classmethod
    def from_perms(cls, perms, degree=None):
        return cls([p.images for p in perms], degree)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.gens, self.degree)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, img) -> bool:
        return self.chain.contains(np.asarray(img, dtype=DTYPE))

    def is_subgroup(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    def orbit(self, point: int) -> set[int]:
        seen = {point}
        queue = [point]
        while queue:
            x = queue.pop()
            for g in self.gens:
                y = int(g[x])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def random_stream(self, seed: int):
        return ProductReplacement(self.gens, self.degree, seed)

    # -- exhaustive streaming ------------------------------------------

    def element_batches(self, cap: int = DEFAULT_STREAM_CAP, batch_hint: int = 16384):
        """Yield (k, degree) arrays jointly covering each element once.

        Deterministic for a fixed chain: elements are products of
        transversal representatives, deepest level first.
        """
        chain = self.chain
        order = chain.order()
        if order > cap:
            raise StreamCapExceeded(order, cap)
        levels = chain.levels
        if not levels:
            yield pm.identity(self.degree)[None, :]
            return
        trans = [
            np.stack([lvl.transversal[x] for x in sorted(lvl.transversal)])
            for lvl in levels
        ]
        # materialize a tail block of the deepest levels
        tail = trans[-1]
        cut = len(levels) - 1
        while cut > 0 and tail.shape[0] * trans[cut - 1].shape[0] <= batch_hint:
            prev = trans[cut - 1]
            # rows: tail_j * prev_i  (tail applied first)
            tail = np.concatenate([prev_row[tail] for prev_row in prev])
            cut -= 1
        if cut == 0:
            yield tail
            return

        outer = trans[:cut]

        def rec(prefix, depth):
            # prefix = u_{cut} * ... * u_{depth+1} composed so far (applied after tail)
            if depth < 0:
                yield prefix[tail] if prefix is not None else tail
                return
            for row in outer[depth]:
                nxt = row if prefix is None else pm.compose(prefix, row)
                yield from rec(nxt, depth - 1)

        # product order: tail element applied first, then u_{cut-1}, ..., u_0
        yield from rec(None, cut - 1)

    def elements(self, cap: int = DEFAULT_STREAM_CAP):
        for batch in self.element_batches(cap):
            for row in batch:
                yield row


class ProductReplacement:
    """Seeded product-replacement random element source."""

    def __init__(self, gens, degree: int, seed: int, slots: int = 10, burn: int = 60):
        self.degree = degree
        base = [np.asarray(g, dtype=DTYPE) for g in gens if not pm.is_identity(np.asarray(g, dtype=DTYPE))]
        if not base:
            base = [pm.identity(degree)]
        self.slots = [base[i % len(base)].copy() for i in range(max(slots, len(base)))]
        self.rng = np.random.Generator(np.random.PCG64(seed))
        for _ in range(burn):
            self._step()

    def _step(self) -> np.ndarray:
        n = len(self.slots)
        i = int(self.rng.integers(n))
        j = int(self.rng.integers(n - 1))
        if j >= i:
            j += 1
        other = self.slots[j]
        if self.rng.integers(2):
            other = pm.inverse(other)
        if self.rng.integers(2):
            self.slots[i] = pm.compose(self.slots[i], other)
        else:
            self.slots[i] = pm.compose(other, self.slots[i])
        return self.slots[i]

    def __next__(self) -> np.ndarray:
        return self._step()

    def __iter__(self):
        return self


def schreier_sims(gens, degree: int | None = None) -> StabilizerChain:
    """Build a verified base and strong generating set."""
    arrs = [np.asarray(g, dtype=DTYPE) for g in gens]
    if not arrs:
        raise ValueError("empty generator list")
    return StabilizerChain(arrs, degree)


def group_order(gens, degree: int | None = None) -> int:
    return schreier_sims(gens, degree).order()


def closure_elements(gens, degree: int, cap: int = 1 << 20) -> np.ndarray:
    """All elements of <gens> as a (n, degree) array (small groups only)."""
    gens = [np.asarray(g, dtype=DTYPE) for g in gens]
    elems = {pm.identity(degree).tobytes(): pm.identity(degree)}
    frontier = list(elems.values())
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = pm.compose(x, g)
                key = y.tobytes()
                if key not in elems:
                    if len(elems) >= cap:
                        raise StreamCapExceeded(len(elems) + 1, cap)
                    elems[key] = y
                    nxt.append(y)
        frontier = nxt
    return np.stack(list(elems.values()))


def normalizer_by_stream(H: PermGroup, R: PermGroup, cap: int = DEFAULT_STREAM_CAP,
                         fpr: Fingerprinter | None = None,
                         extra_predicate=None,
                         max_generators: int = 40) -> PermGroup:
    """N_H(R) for streamable H, via batch conjugation tests.

    Every element of H is tested; matching elements are counted exactly
    and a generating subset is returned whose chain order equals the
    match count.
    """
    if H.degree != R.degree:
        raise DegreeMismatch("H and R act on different degrees")
    for g in R.gens:
        if not H.contains(g):
            raise ValueError("R is not contained in H")
    if fpr is None:
        fpr = Fingerprinter(H.degree)
    r_elems = closure_elements(R.gens, R.degree)
    r_fps = np.unique(fpr.batch(r_elems))
    r_set = {row.tobytes() for row in r_elems}
    rgens = _reduced_gens(R, r_elems)

    count = 0
    kept: list[np.ndarray] = []
    kept_chain: StabilizerChain | None = None
    for batch in H.element_batches(cap):
        inv = pm.batch_inverse(batch)
        conj0 = pm.batch_conjugate_by_rows(rgens[0], batch, inv)
        mask = np.isin(fpr.batch(conj0), r_fps)
        idx = np.flatnonzero(mask)
        for i in idx:
            row = batch[i]
            if conj0[i].tobytes() not in r_set:
                continue
            ok = True
            for rg in rgens[1:]:
                c = pm.conjugate(rg, row)
                if c.tobytes() not in r_set:
                    ok = False
                    break
            if not ok:
                continue
            if extra_predicate is not None and not extra_predicate(row):
                continue
            count += 1
            if kept_chain is None or (len(kept) < max_generators and not kept_chain.contains(row)):
                kept.append(row)
                kept_chain = StabilizerChain(kept, H.degree)
    result = PermGroup(kept if kept else [pm.identity(H.degree)], H.degree)
    if result.order() != count:
        raise RuntimeError(
            f"normalizer generation incomplete: generated {result.order()}, counted {count}"
        )
    return result


def centralizer_by_stream(H: PermGroup, targets, cap: int = DEFAULT_STREAM_CAP,
                          max_generators: int = 40) -> PermGroup:
    """C_H(T) for streamable H and a small list of target permutations.

    Every element of H is tested by batch conjugation of each target;
    the count is exact and the returned group's order must match it.
    """
    targets = [np.asarray(t, dtype=pm.DTYPE) for t in targets]
    count = 0
    kept: list[np.ndarray] = []
    kept_chain: StabilizerChain | None = None
    for batch in H.element_batches(cap):
        rows = batch
        inv = pm.batch_inverse(rows)
        for t in targets:
            conj = pm.batch_conjugate_by_rows(t, rows, inv)
            keep = (conj == t[None, :]).all(axis=1)
            rows = rows[keep]
            inv = inv[keep]
            if not len(rows):
                break
        for row in rows:
            count += 1
            if kept_chain is None or (len(kept) < max_generators
                                      and not kept_chain.contains(row)):
                kept.append(row)
                kept_chain = StabilizerChain(kept, H.degree)
    result = PermGroup(kept if kept else [pm.identity(H.degree)], H.degree)
    if result.order() != count:
        raise RuntimeError(
            f"centralizer generation incomplete: generated {result.order()}, "
            f"counted {count}")
    return result


def _reduced_gens(R: PermGroup, r_elems: np.ndarray) -> list[np.ndarray]:
    """A small generating list for R (first generator used as prefilter)."""
    gens = []
    chain = None
    for g in R.gens:
        if pm.is_identity(g):
            continue
        if chain is not None and chain.contains(g):
            continue
        gens.append(g)
        chain = StabilizerChain(gens, R.degree)
        if chain.order() == len(r_elems):
            break
    if not gens:
        gens = [pm.identity(R.degree)]
    return gens
