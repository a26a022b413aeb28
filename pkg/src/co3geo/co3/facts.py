"""Structural facts behind the collapse schedule.

Three families of checks live here:

* cone facts -- the four candidate types removed first (pM, M_sq, pML,
  ML_sq) each contain a unique smaller candidate holding all of their
  points, so their residues are cones and can be stripped, in that
  order;
* the normality pairing -- a point subgroup is normal in a line
  structure group exactly when the point lies on its central line, and
  every non-normal pair is completed by a unique M-space, which is what
  identifies the geometry with the reduced poset;
* a stabilizer classifier for 2-subgroups with a central involution in
  the center: the central involutions of the center always form a
  point, line, plane or M-space of the geometry, and planes extend
  uniquely to M-spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import permutation as pm
from ..groups import closure_elements
from .context import Co3Context
from .model import RadicalInstance
from .sylow import SylowModel
from .verify import Table1Result, VerifyError


@dataclass
class ConeFacts:
    unique_m_in_pm: bool
    pm_points_in_m: bool
    unique_m_in_m_sq: bool
    m_sq_points_in_m: bool
    unique_l_in_pml: bool
    pml_points_in_l: bool
    unique_l_in_ml_sq: bool
    ml_sq_points_in_l: bool
    no_m_space_in_p_sq: bool
    pm_below_pml_not_l: bool    # why pM must be removed before pML

    @property
    def all_ok(self) -> bool:
        return all(getattr(self, f) for f in self.__dataclass_fields__)


def cone_facts(model: SylowModel, instances: dict[str, RadicalInstance],
               collections: dict) -> ConeFacts:
    """Uniqueness facts that make the first four removals cone-shaped.

    `collections` maps candidate name -> container name -> point sets of
    the conjugates inside, as produced by the orbit enumeration.
    """
    m_in = collections["M"]
    l_in = collections["L"]
    pml_bytes = instances["pML"]._byteset
    l_bytes = instances["L"]._byteset
    pm_rows = instances["pM"].rows
    return ConeFacts(
        unique_m_in_pm=m_in["pM"] == [model.M],
        pm_points_in_m=instances["pM"].point_idx == model.M,
        unique_m_in_m_sq=m_in["M_sq"] == [model.M],
        m_sq_points_in_m=instances["M_sq"].point_idx == model.M,
        unique_l_in_pml=l_in["pML"] == [model.line_structure],
        pml_points_in_l=instances["pML"].point_idx == model.line_structure,
        unique_l_in_ml_sq=l_in["ML_sq"] == [model.line_structure],
        ml_sq_points_in_l=instances["ML_sq"].point_idx == model.line_structure,
        no_m_space_in_p_sq=m_in["p_sq"] == [],
        pm_below_pml_not_l=(
            all(r.tobytes() in pml_bytes for r in pm_rows)
            and not all(r.tobytes() in l_bytes for r in pm_rows)
            and l_in["pM"] == []),
    )


@dataclass
class NormalityPairing:
    normal_points: frozenset       # points whose subgroup is normal in R_L
    paired: bool                   # every other point completes uniquely

    @property
    def all_ok(self) -> bool:
        return self.paired and len(self.normal_points) == 3


def normality_pairing(model: SylowModel,
                      instances: dict[str, RadicalInstance]) -> NormalityPairing:
    """Match non-normal point-in-line-structure chains with M-spaces.

    A point subgroup is normal in the line structure group iff the point
    is central in it, i.e. lies on the base line.  Every other point of
    the structure lies in exactly one of its three M-spaces, and the
    plane spanned by the point and the base line is a pure subgroup of
    that M-space -- so each non-normal chain extends in exactly one way.
    """
    r_l = instances["L"]
    normal = set()
    for i in sorted(r_l.point_idx):
        x = model.centrals[i]
        if all((g[x] == x[g]).all() for g in r_l.gens):
            normal.add(i)
    if frozenset(normal) != model.L:
        raise VerifyError("normal points of the line structure are not L")

    paired = True
    spaces = (model.M1, model.M2, model.M3)
    for i in sorted(r_l.point_idx - model.L):
        homes = [s for s in spaces if i in s]
        plane = model.span(set(model.L) | {i})
        if len(homes) != 1 or len(plane) != 7 or not plane <= homes[0]:
            paired = False
    for i in sorted(model.L):
        if sum(1 for s in spaces if i in s) != 3:
            paired = False
    return NormalityPairing(normal_points=frozenset(normal), paired=paired)


@dataclass
class CenterShape:
    kind: str                      # "point", "line", "plane" or "m_space"
    subgroup_order: int
    center_points: tuple           # 2A class indices of the central involutions
    m_space: tuple | None          # for a plane: the unique M-space around it

    @property
    def ok(self) -> bool:
        return self.kind in ("point", "line", "plane", "m_space")


_KINDS = {1: "point", 3: "line", 7: "plane", 15: "m_space"}


def classify_center(ctx: Co3Context, table1: Table1Result,
                    u_gens) -> CenterShape:
    """Shape of the central involutions in the center of a 2-subgroup.

    For any 2-subgroup whose center meets the central class, those
    central involutions form (with the identity) an elementary abelian
    group of order at most 16 -- a simplex of the geometry.  A plane is
    completed by a unique M-space, found by transporting the plane onto
    the base point and scanning its M-spaces.
    """
    u = closure_elements(list(u_gens), ctx.degree, cap=4096)
    n = len(u)
    if n & (n - 1):
        raise ValueError("generators do not generate a 2-group")
    center_mask = np.ones(n, dtype=bool)
    for g in u_gens:
        center_mask &= (np.asarray(g)[u] == u[:, g]).all(axis=1)
    zu = u[center_mask]
    in_2a = ctx.class2A.contains_fp(ctx.fp.batch(zu))
    h = zu[in_2a]
    if len(h) == 0:
        raise ValueError("center contains no central involution")
    # closure under products (with the identity removed)
    h_fps = {int(f) for f in ctx.fp.batch(h)}
    idt = pm.identity(ctx.degree)
    for a in h:
        for b in h:
            prod = b[a]
            if (prod == idt).all():
                continue
            if int(ctx.fp.one(prod)) not in h_fps:
                raise VerifyError("central involutions of the center not closed")
    if len(h) not in _KINDS:
        raise VerifyError(f"{len(h)} central involutions in the center")
    kind = _KINDS[len(h)]

    idx = tuple(sorted(int(ctx.class2A.index_of(x)) for x in h))
    m_space = None
    if kind == "plane":
        # move one point of the plane onto the base point
        w = ctx.class2A.conjugator(idx[0])       # base^w = point
        wi = pm.inverse(w)
        moved = frozenset(int(ctx.class2A.index_of(pm.conjugate(x, wi)))
                          for x in h)
        homes = [s for s in table1.m_spaces_z if moved <= s]
        if len(homes) != 1:
            raise VerifyError("plane does not lie in a unique M-space")
        back = [pm.conjugate(ctx.class2A.element(i), w) for i in sorted(homes[0])]
        m_space = tuple(sorted(int(ctx.class2A.index_of(x)) for x in back))
        if not set(idx) <= set(m_space):
            raise VerifyError("transported M-space misses the plane")
    return CenterShape(kind=kind, subgroup_order=n,
                       center_points=idx, m_space=m_space)
