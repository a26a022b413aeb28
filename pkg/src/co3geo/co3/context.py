"""Load the degree-276 generators and calibrate the involution classes.

Identification is by hard numbers: the group order must be
495,766,656,000 and there must be exactly two conjugacy classes of
involutions, of sizes 170,775 (centralizer 2,903,040 -- the central
class) and 2,608,200 (centralizer 190,080).  On 276 points the two
classes are separated by their fixed-point counts (36 vs 12), which is
recorded as an O(1) classifier for later use.
"""

from __future__ import annotations

import numpy as np

from .. import permutation as pm
from ..classes import ClassIndex, centralizer_gens, class_size_only, enumerate_class
from ..groups import Fingerprinter, PermGroup

GROUP_ORDER = 495_766_656_000
DEGREE = 276
CENTRAL_CLASS_SIZE = 170_775          # centralizer 2,903,040
NONCENTRAL_CLASS_SIZE = 2_608_200     # centralizer 190,080
CENTRAL_CENTRALIZER = 2_903_040
NONCENTRAL_CENTRALIZER = 190_080


class CalibrationError(ValueError):
    pass


def perm_power(g: np.ndarray, k: int) -> np.ndarray:
    r = pm.identity(len(g))
    while k:
        if k & 1:
            r = pm.compose(r, g)
        g = pm.compose(g, g)
        k >>= 1
    return r


class Co3Context:
    """Calibrated group data: chain, 2A class, its centralizer."""

    def __init__(self, gens, *, seed: int = 20070403, check_noncentral: bool = True):
        self.gens = [np.asarray(g, dtype=pm.DTYPE) for g in gens]
        self.degree = len(self.gens[0])
        if self.degree != DEGREE:
            raise CalibrationError(f"degree {self.degree}, expected {DEGREE}")
        self.seed = seed
        self.group = PermGroup(self.gens, self.degree)
        if self.group.order() != GROUP_ORDER:
            raise CalibrationError(
                f"group order {self.group.order()}, expected {GROUP_ORDER}")
        self.fp = Fingerprinter(self.degree)

        reps = self._involution_reps()
        if sorted(reps) != [12, 36]:
            raise CalibrationError(
                f"involution fixed-point signatures {sorted(reps)}, expected [12, 36]")
        self.fixed_count_central = 36
        self.fixed_count_noncentral = 12

        self.z = reps[36]
        self.class2A: ClassIndex = enumerate_class(self.gens, self.z, self.fp,
                                                   cap=CENTRAL_CLASS_SIZE + 1)
        if self.class2A.size != CENTRAL_CLASS_SIZE:
            raise CalibrationError(
                f"central class size {self.class2A.size}, expected {CENTRAL_CLASS_SIZE}")
        self.centralizer_z: PermGroup = centralizer_gens(self.group, self.class2A,
                                                         seed=seed)
        assert self.centralizer_z.order() == CENTRAL_CENTRALIZER

        self.noncentral_class_size = None
        if check_noncentral:
            n = class_size_only(self.gens, reps[12], self.fp,
                                cap=NONCENTRAL_CLASS_SIZE + 1)
            if n != NONCENTRAL_CLASS_SIZE:
                raise CalibrationError(
                    f"non-central class size {n}, expected {NONCENTRAL_CLASS_SIZE}")
            self.noncentral_class_size = n
        self.rep_noncentral = reps[12]

    # -- classification helpers -----------------------------------------

    def _involution_reps(self) -> dict[int, np.ndarray]:
        """One involution per fixed-point signature, via random powering."""
        reps: dict[int, np.ndarray] = {}
        stream = self.group.random_stream(seed=self.seed)
        idt = np.arange(self.degree)
        for _ in range(600):
            g = next(stream)
            o = pm.perm_order(g)
            if o % 2:
                continue
            t = perm_power(g, o // 2)
            fixed = int((t == idt).sum())
            reps.setdefault(fixed, t)
            if len(reps) > 2:
                raise CalibrationError("more than two involution signatures found")
        if len(reps) != 2:
            raise CalibrationError(f"found signatures {sorted(reps)}, expected two")
        return reps

    def is_central_involution(self, img: np.ndarray) -> bool:
        return bool(self.class2A.contains(img))

    def central_mask(self, batch: np.ndarray) -> np.ndarray:
        """Vectorized membership of rows in the central involution class."""
        return self.class2A.contains_fp(self.fp.batch(batch))

    def classify_involution(self, img: np.ndarray) -> str:
        fixed = int((img == np.arange(self.degree)).sum())
        if fixed == self.fixed_count_central:
            return "central"
        if fixed == self.fixed_count_noncentral:
            return "noncentral"
        raise ValueError("element is not an involution of this group")

    def conjugator_to(self, target: np.ndarray) -> np.ndarray:
        """g with z^g = target, for target in the central class."""
        return self.class2A.conjugator(self.class2A.index_of(target))
