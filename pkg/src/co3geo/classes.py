"""Conjugacy class enumeration by breadth-first search.

A class is grown from a representative by repeatedly conjugating the
frontier with the group generators.  Elements are deduplicated through
64-bit random-table fingerprints; for a class of size N the chance of a
fingerprint collision (which would silently truncate the class) is about
N^2 / 2^65, i.e. ~2e-7 for the largest class handled here (2.6e6).
Callers that need certainty cross-check the class size against the
centralizer order.

Two storage modes:
  * full images + parent words (conjugators from the representative are
    reconstructible) -- used for classes up to a few hundred thousand;
  * fingerprints only -- used for multi-million element classes where
    only size and membership tests are required.
"""

from __future__ import annotations

import numpy as np

from . import permutation as pm
from .groups import Fingerprinter, PermGroup


class ClassTooLarge(RuntimeError):
    def __init__(self, partial_size: int, cap: int):
        super().__init__(f"conjugacy class exceeds cap {cap} (reached {partial_size})")
        self.partial_size = partial_size
        self.cap = cap


class ClassIndex:
    """An enumerated conjugacy class.

    Attributes:
        rep: image array of the representative (element #0).
        size: number of elements found.
        fingerprints: uint64 array, one per element, in discovery order.
        images: (size, degree) array, or None in fingerprint-only mode.
        parents / gen_used: Schreier forest (index of parent element and
            of the conjugating generator), or None.
    """

    def __init__(self, gens, rep, fp: Fingerprinter, images, fingerprints,
                 parents, gen_used):
        self.gens = gens
        self.rep = rep
        self.fp = fp
        self.images = images
        self.fingerprints = fingerprints
        self.parents = parents
        self.gen_used = gen_used
        self.size = len(fingerprints)
        self._fp_sorted = np.sort(fingerprints)
        self._fp_to_index: dict[int, int] | None = None

    # -- membership ----------------------------------------------------

    def contains_fp(self, fps) -> np.ndarray:
        """Vectorized membership test on fingerprints."""
        fps = np.atleast_1d(np.asarray(fps, dtype=np.uint64))
        idx = np.searchsorted(self._fp_sorted, fps)
        idx = np.minimum(idx, self.size - 1)
        return self._fp_sorted[idx] == fps

    def contains(self, images: np.ndarray) -> bool:
        return bool(self.contains_fp(self.fp.one(images))[0])

    def index_of(self, images: np.ndarray) -> int:
        if self._fp_to_index is None:
            self._fp_to_index = {int(f): i for i, f in enumerate(self.fingerprints)}
        return self._fp_to_index[int(self.fp.one(images))]

    # -- Schreier words ------------------------------------------------

    def conjugator(self, idx: int) -> np.ndarray:
        """An element w with rep^w = element #idx (needs stored words)."""
        if self.parents is None:
            raise ValueError("class was enumerated without parent words")
        word = []
        while idx != 0:
            word.append(int(self.gen_used[idx]))
            idx = int(self.parents[idx])
        w = pm.identity(len(self.rep))
        for gi in reversed(word):
            w = pm.compose(w, self.gens[gi])
        return w

    def element(self, idx: int) -> np.ndarray:
        if self.images is not None:
            return self.images[idx]
        return pm.conjugate(self.rep, self.conjugator(idx))


def enumerate_class(gens, rep, fp: Fingerprinter, *, store_images: bool = True,
                    store_words: bool = True, cap: int = 5_000_000,
                    chunk: int = 200_000) -> ClassIndex:
    """BFS the conjugation orbit of rep under <gens>."""
    degree = len(rep)
    gens = [np.asarray(g, dtype=pm.DTYPE) for g in gens]
    gen_invs = [pm.inverse(g) for g in gens]

    seen: dict[int, int] = {int(fp.one(rep)): 0}
    all_fps = [np.array([fp.one(rep)], dtype=np.uint64)]
    all_images = [rep[None, :].copy()] if store_images else None
    parents_l = [np.array([-1], dtype=np.int64)] if store_words else None
    gen_used_l = [np.array([-1], dtype=np.int64)] if store_words else None

    frontier = rep[None, :].copy()
    frontier_idx = np.array([0], dtype=np.int64)
    total = 1
    while len(frontier):
        new_rows = []
        new_fps = []
        new_parents = []
        new_gens = []
        for start in range(0, len(frontier), chunk):
            fchunk = frontier[start:start + chunk]
            ichunk = frontier_idx[start:start + chunk]
            for gi, (g, ginv) in enumerate(zip(gens, gen_invs)):
                conj = g[fchunk[:, ginv]]
                fps = fp.batch(conj)
                for row, f, par in zip(conj, fps, ichunk):
                    f = int(f)
                    if f in seen:
                        continue
                    seen[f] = total
                    total += 1
                    new_rows.append(row.copy())
                    new_fps.append(f)
                    new_parents.append(int(par))
                    new_gens.append(gi)
                    if total > cap:
                        raise ClassTooLarge(total, cap)
        if not new_rows:
            break
        frontier = np.stack(new_rows)
        frontier_idx = np.arange(total - len(new_rows), total, dtype=np.int64)
        all_fps.append(np.array(new_fps, dtype=np.uint64))
        if store_images:
            all_images.append(frontier)
        if store_words:
            parents_l.append(np.array(new_parents, dtype=np.int64))
            gen_used_l.append(np.array(new_gens, dtype=np.int64))

    return ClassIndex(
        gens, rep, fp,
        np.concatenate(all_images) if store_images else None,
        np.concatenate(all_fps),
        np.concatenate(parents_l) if store_words else None,
        np.concatenate(gen_used_l) if store_words else None,
    )


def class_size_only(gens, rep, fp: Fingerprinter, *, cap: int = 5_000_000,
                    chunk: int = 200_000) -> int:
    """Size of the conjugation orbit, keeping only fingerprints.

    Peak memory is one frontier of images plus the fingerprint set, which
    keeps multi-million element classes within a few hundred MB.
    """
    degree = len(rep)
    gens = [np.asarray(g, dtype=pm.DTYPE) for g in gens]
    gen_invs = [pm.inverse(g) for g in gens]
    seen: set[int] = {int(fp.one(rep))}
    frontier = rep[None, :].copy()
    while len(frontier):
        new_rows = []
        for start in range(0, len(frontier), chunk):
            fchunk = frontier[start:start + chunk]
            for g, ginv in zip(gens, gen_invs):
                conj = g[fchunk[:, ginv]]
                fps = fp.batch(conj)
                fresh = np.fromiter((int(f) not in seen for f in fps),
                                    dtype=bool, count=len(fps))
                for row, f in zip(conj[fresh], fps[fresh]):
                    f = int(f)
                    if f in seen:
                        continue
                    seen.add(f)
                    new_rows.append(row.copy())
                    if len(seen) > cap:
                        raise ClassTooLarge(len(seen), cap)
        if not new_rows:
            break
        frontier = np.stack(new_rows)
    return len(seen)


def centralizer_gens(group: PermGroup, cls: ClassIndex, *, seed: int = 7,
                     max_tries: int = 4000) -> PermGroup:
    """Centralizer of cls.rep in group, via random Schreier generators.

    For random g, rep^g lands at some class element #i; correcting by the
    stored conjugator w_i gives g * w_i^-1 in the centralizer.  Collect
    until the order reaches |group| / |class| (orbit-stabilizer).
    """
    target = group.order() // cls.size
    assert group.order() % cls.size == 0
    gens: list[np.ndarray] = []
    chain = None
    stream = group.random_stream(seed=seed)
    for _ in range(max_tries):
        g = next(stream)
        i = cls.index_of(pm.conjugate(cls.rep, g))
        c = pm.compose(g, pm.inverse(cls.conjugator(i)))
        assert (pm.conjugate(cls.rep, c) == cls.rep).all()
        if pm.is_identity(c):
            continue
        if chain is not None and chain.contains(c):
            continue
        gens.append(c)
        cand = PermGroup(gens, group.degree)
        chain = cand.chain
        if cand.order() == target:
            return cand
        if cand.order() > target:
            raise AssertionError("centralizer overshoot: class enumeration inconsistent")
    raise RuntimeError(f"centralizer not reached in {max_tries} samples "
                       f"(at {chain.order() if chain else 1} of {target})")
