"""Labeled substructures of the Sylow 2-subgroup.

Two layers live here.  First, the combinatorial geometry on the 55
central involutions of S: the line structure (union of the three
M-spaces through the common line L, 39 points) and the generalized
quadrangle GQ(2,2) on the cone point (15 lines and 15 planes through
z covering 31 points).  Second, the eleven candidate 2-radical
subgroups of G, realized as explicit subgroups of S -- most of them as
preimages of subgroups of the unitriangular quotient, described by
conditions on the matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import permutation as pm
from ..groups import closure_elements
from .sylow import CENTRAL_COUNT, SYLOW_ORDER, SylowModel

# strict upper-triangle bit positions in the quotient key
BIT_X12, BIT_X13, BIT_X14, BIT_X23, BIT_X24, BIT_X34 = range(6)


class StructureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# the generalized quadrangle on the cone point
# ---------------------------------------------------------------------------

@dataclass
class ConeQuadrangle:
    lines: list[frozenset]      # 15 triples of central indices, all through z
    planes: list[frozenset]     # 15 pure central 2^3 subgroups through z
    points: frozenset           # the 31 covered central indices
    boxes: list[frozenset]      # the three planes lying inside M1, M2, M3
    overlap: frozenset          # points shared with the line structure
    overlap_line_count: int     # GQ lines inside the line structure


def cone_quadrangle(model: SylowModel) -> ConeQuadrangle:
    """Build and cross-check the GQ(2,2) living on the cone point z.

    The 15 lines and 15 planes are produced from the labeled generators
    (a2, a3 and the lifts z_i), then verified against an independent
    enumeration of the lines through z inside the covered point set.
    """
    a1, a2, a3 = model.a1, model.a2, model.a3
    zl = model.lifts  # zl[i] is the lift z_{i+1}
    mu = model.mult
    a23 = mu(a2, a3)

    line_tips = [a2, a3, a23,
                 zl[0], mu(a2, zl[0]),
                 zl[4], mu(a2, zl[4]),
                 zl[6], mu(a3, zl[6]),
                 zl[7], mu(a3, zl[7]),
                 zl[8], mu(a23, zl[8]),
                 zl[9], mu(a23, zl[9])]
    lines = []
    for x in line_tips:
        lines.append(frozenset({a1, x, mu(a1, x)}))
    if len(set(lines)) != 15 or any(len(l) != 3 for l in lines):
        raise StructureError("labeled cone lines are degenerate")

    plane_pairs = [(a2, a3), (a2, zl[0]), (a2, zl[4]),
                   (a3, zl[6]), (a3, zl[7]),
                   (a23, zl[8]), (a23, zl[9]),
                   (zl[0], zl[6]), (zl[0], zl[7]),
                   (zl[4], zl[6]), (zl[4], zl[7]),
                   (mu(a2, zl[0]), mu(a3, zl[6])),
                   (mu(a2, zl[0]), mu(a3, zl[7])),
                   (mu(a2, zl[4]), mu(a3, zl[6])),
                   (mu(a2, zl[4]), mu(a3, zl[7]))]
    planes = [model.span([a1, x, y]) for x, y in plane_pairs]
    if len(set(planes)) != 15 or any(len(p) != 7 for p in planes):
        raise StructureError("labeled cone planes are degenerate")

    points = frozenset().union(*planes)
    if len(points) != 31 or points != frozenset().union(*lines):
        raise StructureError("cone lines and planes do not cover 31 points")

    # independent census: the lines through z inside the covered set
    derived = set()
    for x in points:
        if x == a1:
            continue
        y = int(model.prod[a1, x])
        if y >= 0 and y in points:
            derived.add(frozenset({a1, x, y}))
    if derived != set(lines):
        raise StructureError("labeled lines differ from the derived cone lines")

    _check_gq_axioms(lines, planes)

    # overlap with the line structure, and the maximality statement
    boxes = [model.span([a1, a2, a3]),
             model.span([a1, a2, zl[0]]),
             model.span([a1, a2, zl[4]])]
    for b, m in zip(boxes, (model.M1, model.M2, model.M3)):
        if not b <= m:
            raise StructureError("box plane not inside its M-space")
    overlap = points & model.line_structure
    if overlap != boxes[0] | boxes[1] | boxes[2] or len(overlap) != 15:
        raise StructureError("overlap with the line structure is not the 3 boxes")
    overlap_line_count = sum(1 for l in lines if l <= model.line_structure)
    if overlap_line_count != 7:
        raise StructureError("expected 7 cone lines inside the line structure")

    rank3_max = {s for s in model.maximal_pure if len(s) == 7}
    if rank3_max != set(planes) - set(boxes):
        raise StructureError(
            "maximal rank-3 pure centrals are not the 12 non-box planes")
    if {s for s in model.maximal_pure if len(s) == 15} != \
            {model.M1, model.M2, model.M3}:
        raise StructureError("maximal rank-4 pure centrals are not M1, M2, M3")

    return ConeQuadrangle(lines=lines, planes=planes, points=points,
                          boxes=boxes, overlap=overlap,
                          overlap_line_count=overlap_line_count)


def _check_gq_axioms(lines: list[frozenset], planes: list[frozenset]) -> None:
    """GQ(2,2) axioms with the 15 lines as points and 15 planes as lines."""
    inc = [[l <= p for p in planes] for l in lines]
    for j in range(15):
        if sum(inc[i][j] for i in range(15)) != 3:
            raise StructureError("a plane does not carry exactly 3 cone lines")
    for i in range(15):
        if sum(inc[i][j] for j in range(15)) != 3:
            raise StructureError("a cone line does not lie on exactly 3 planes")
    for i in range(15):
        for k in range(i + 1, 15):
            if sum(inc[i][j] and inc[k][j] for j in range(15)) > 1:
                raise StructureError("two cone lines share more than one plane")

    def coplanar(i, k):
        return i == k or any(inc[i][j] and inc[k][j] for j in range(15))

    for i in range(15):
        for j in range(15):
            if inc[i][j]:
                continue
            hits = sum(1 for k in range(15) if inc[k][j] and coplanar(i, k))
            if hits != 1:
                raise StructureError("quadrangle axiom fails for a "
                                     "non-incident line/plane pair")


def line_census(model: SylowModel, points: frozenset) -> list[frozenset]:
    """All lines (pure central 2^2 subgroups) inside a point set."""
    pts = sorted(points)
    out = set()
    for ai, i in enumerate(pts):
        for j in pts[ai + 1:]:
            k = int(model.prod[i, j])
            if k >= 0 and k in points:
                out.add(frozenset({i, j, k}))
    return sorted(out, key=sorted)


def m_spaces_inside(model: SylowModel, points: frozenset) -> list[frozenset]:
    """The rank-4 pure central subgroups contained in a point set."""
    return [s for s in model.pure_subgroups if len(s) == 15 and s <= points]


# ---------------------------------------------------------------------------
# the eleven radical candidates
# ---------------------------------------------------------------------------

RADICAL_NAMES = ["p", "M", "p_sq", "pM", "M_sq", "L",
                 "pML", "ML_sq", "pM_sq", "pL_sq", "S"]
RADICAL_ORDERS = [2, 16, 64, 128, 128, 256, 512, 512, 512, 512, 1024]
# number of central involutions in the center of each candidate; for
# ML_sq the matrix description forces Z = <a1, a2> (three central
# involutions), since x12 = 0 makes every element fix a2
RADICAL_CENTER_POINTS = [1, 15, 1, 1, 7, 3, 1, 3, 1, 1, 1]


@dataclass
class RadicalInstance:
    name: str
    order: int
    rows: np.ndarray            # all elements, lexicographically sorted
    gens: list[np.ndarray]      # a verified generating subset
    keyset: frozenset           # image in the unitriangular quotient
    center_rows: np.ndarray
    point_idx: frozenset        # central involutions contained
    center_point_idx: frozenset

    @property
    def center_order(self) -> int:
        return len(self.center_rows)

    def contains_row(self, img: np.ndarray) -> bool:
        return img.tobytes() in self._byteset

    def __post_init__(self):
        self._byteset = {r.tobytes() for r in self.rows}


def _verified_generators(rows: np.ndarray, degree: int) -> list[np.ndarray]:
    """A small generating set whose closure is exactly the given set."""
    byteset = {r.tobytes() for r in rows}
    gens: list[np.ndarray] = [pm.identity(degree)]
    have = {gens[0].tobytes()}
    while len(have) < len(byteset):
        nxt = next(r for r in rows if r.tobytes() not in have)
        gens.append(nxt)
        closed = closure_elements(gens, degree, cap=len(byteset) + 1)
        have = {r.tobytes() for r in closed}
        if not have <= byteset:
            raise StructureError("candidate element set is not a subgroup")
    return gens[1:]


def _make_instance(model: SylowModel, name: str, rows: np.ndarray) -> RadicalInstance:
    degree = model.ctx.degree
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    gens = _verified_generators(rows, degree)
    keyset = frozenset(model.u4_key(r) for r in rows)
    center_rows = np.stack([x for x in rows
                            if all(pm.commutes(x, g) for g in gens)])
    # every involution in the center must be a central (2A) involution
    for x in center_rows:
        if pm.is_identity(x) or not pm.is_identity(pm.compose(x, x)):
            continue
        if model.central_index(x) is None:
            raise StructureError(
                f"center of {name} holds a non-central involution")
    byteset = {r.tobytes() for r in rows}
    point_idx = frozenset(i for i in range(CENTRAL_COUNT)
                          if model.centrals[i].tobytes() in byteset)
    cbytes = {r.tobytes() for r in center_rows}
    center_point_idx = frozenset(i for i in point_idx
                                 if model.centrals[i].tobytes() in cbytes)
    return RadicalInstance(name=name, order=len(rows), rows=rows, gens=gens,
                           keyset=keyset, center_rows=center_rows,
                           point_idx=point_idx,
                           center_point_idx=center_point_idx)


def instantiate_radicals(model: SylowModel) -> dict[str, RadicalInstance]:
    """The eleven candidates as explicit subgroups of S.

    All but two are preimages of subgroups of the unitriangular
    quotient cut out by vanishing conditions on matrix entries; the
    remaining two are <z> and the subgroup generated by the labeled
    involutions a1, a2, a3, z1, z5, z7.
    """
    degree = model.ctx.degree
    keys = model.u4_keys

    def pullback(mask_fn) -> np.ndarray:
        sel = np.fromiter((mask_fn(int(k)) for k in keys),
                          dtype=bool, count=SYLOW_ORDER)
        return model.elements[sel]

    z_row = model.centrals[model.a1]
    p_rows = np.stack([pm.identity(degree), z_row])

    gen_idx = [model.a1, model.a2, model.a3,
               model.lifts[0], model.lifts[4], model.lifts[6]]
    psq_rows = closure_elements([model.centrals[i] for i in gen_idx],
                                degree, cap=65)

    defs = [
        ("p", p_rows),
        ("M", pullback(lambda k: k == 0)),
        ("p_sq", psq_rows),
        # first row free, rest zero
        ("pM", pullback(lambda k: k & (1 << BIT_X23 | 1 << BIT_X24
                                       | 1 << BIT_X34) == 0)),
        # last column free, rest zero
        ("M_sq", pullback(lambda k: k & (1 << BIT_X12 | 1 << BIT_X13
                                         | 1 << BIT_X23) == 0)),
        # top-right 2x2 block free
        ("L", pullback(lambda k: k & (1 << BIT_X12 | 1 << BIT_X34) == 0)),
        ("pML", pullback(lambda k: k & (1 << BIT_X34) == 0)),
        ("ML_sq", pullback(lambda k: k & (1 << BIT_X12) == 0)),
        ("pM_sq", pullback(lambda k: k & (1 << BIT_X23) == 0)),
        ("pL_sq", pullback(lambda k: (k & 1) == (k >> BIT_X34) & 1)),
        ("S", model.elements),
    ]
    out: dict[str, RadicalInstance] = {}
    for (name, rows), expected, zpts in zip(defs, RADICAL_ORDERS,
                                            RADICAL_CENTER_POINTS):
        inst = _make_instance(model, name, rows)
        if inst.order != expected:
            raise StructureError(f"|{name}| = {inst.order}, expected {expected}")
        if len(inst.center_point_idx) != zpts:
            raise StructureError(
                f"center of {name} holds {len(inst.center_point_idx)} "
                f"central involutions, expected {zpts}")
        out[name] = inst

    _cross_check_radicals(model, out)
    return out


def _cross_check_radicals(model: SylowModel,
                          inst: dict[str, RadicalInstance]) -> None:
    zl = model.lifts
    if inst["p"].point_idx != frozenset({model.a1}):
        raise StructureError("p is not the cone point subgroup")
    if inst["M"].point_idx != model.M:
        raise StructureError("the kernel pullback is not M")
    if inst["pM"].point_idx != model.M:
        raise StructureError("pM should contain exactly the points of M")
    if inst["M_sq"].center_point_idx != model.span(
            [model.a1, model.a2, model.a3]):
        raise StructureError("Z(M_sq) is not the box plane")
    if inst["L"].center_point_idx != model.L:
        raise StructureError("Z(L) is not the common line")
    if inst["ML_sq"].center_point_idx != model.L:
        raise StructureError("Z(ML_sq) is not the common line")
    if inst["L"].point_idx != model.line_structure:
        raise StructureError("points of L are not the line structure")
    if inst["pL_sq"].point_idx != frozenset(range(CENTRAL_COUNT)):
        raise StructureError("pL_sq should contain all 55 points")
    if len(inst["pM_sq"].point_idx) != 39:
        raise StructureError("pM_sq should contain 39 points")
    if inst["pM_sq"].point_idx != inst["p_sq"].point_idx | model.M:
        raise StructureError("points of pM_sq are not the quadrangle plus M")
    if len(inst["p_sq"].keyset) != 8:
        raise StructureError("image of p_sq is not 2^3")
    # the subgroup generated by z1, z5, z7 in the quotient is elementary
    # abelian, so its key set is closed under entry-wise addition
    for k1 in inst["p_sq"].keyset:
        for k2 in inst["p_sq"].keyset:
            if k1 ^ k2 not in inst["p_sq"].keyset:
                raise StructureError("image of p_sq is not closed")
    lifted = {zl[0], zl[4], zl[6]}
    if not lifted <= inst["p_sq"].point_idx:
        raise StructureError("p_sq is missing a labeled generator")
    # L is generated by its central involutions
    rowset = {r.tobytes() for r in
              closure_elements(list(model.centrals[sorted(model.line_structure)]),
                               model.ctx.degree, cap=257)}
    if rowset != {r.tobytes() for r in inst["L"].rows}:
        raise StructureError("L is not generated by its points")
