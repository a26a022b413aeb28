"""Orbit data of the normalizers acting on flags inside the Sylow group.

For each container X among the square-type candidates, the normalizer
N_G(X) permutes the points, M-spaces, line structures and smaller
square-type subgroups lying in X.  The orbit sizes of those actions are
the combinatorial backbone of the collapse schedule, so they are checked
in full here.

Which conjugates of a candidate R lie inside X is settled exactly: for
a 2-centric R, any conjugate R' contained in S has z in C_G(R') and
hence z in Z(R'), so R' belongs to the C(z)-orbit of R.  That the
C(z)-orbit covers *all* conjugates with z in the center is an incidence
count: #conjugates * #(central involutions in the center) / #points
must equal the C(z)-orbit length, which the code asserts from the
verified normalizer orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import permutation as pm
from .context import Co3Context, GROUP_ORDER, CENTRAL_CLASS_SIZE
from .model import RadicalInstance
from .sylow import CENTRAL_COUNT, SylowModel
from .verify import Table1Result, VerifyError, cz_orbit_of_subgroup


@dataclass
class Table2Row:
    flag: tuple[str, ...]
    container: str
    normalizer_order: int
    orbit_sizes: list[int]
    expected: list[int]

    @property
    def ok(self) -> bool:
        return self.orbit_sizes == self.expected


@dataclass
class Table2Result:
    rows: list[Table2Row]
    collections: dict

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)


def _orbit_count_consistent(table1: Table1Result, name: str,
                            center_points: int, orbit_len: int) -> None:
    """Incidence count: all conjugates with z central lie in one C(z)-orbit."""
    n_order = table1.row(name).normalizer_order
    total = (GROUP_ORDER // n_order) * center_points
    if total % CENTRAL_CLASS_SIZE or total // CENTRAL_CLASS_SIZE != orbit_len:
        raise VerifyError(
            f"conjugates of {name} through z do not form one orbit "
            f"({total / CENTRAL_CLASS_SIZE} vs {orbit_len})")


def conjugates_inside(ctx: Co3Context, model: SylowModel,
                      table1: Table1Result, inst: RadicalInstance,
                      containers: dict[str, frozenset]) -> dict[str, list[frozenset]]:
    """Conjugates of a centric candidate lying in each container subgroup.

    Containers are given as byte-sets of their elements; returns, per
    container name, the point sets (central-involution indices) of the
    contained conjugates.
    """
    orbit = cz_orbit_of_subgroup(ctx, inst.rows, max_size=1024)
    _orbit_count_consistent(table1, inst.name, len(inst.center_point_idx),
                            len(orbit))
    out: dict[str, list[frozenset]] = {name: [] for name in containers}
    s_fps = frozenset(int(f) for f in ctx.fp.batch(model.elements))
    for key, w in orbit:
        if not key <= s_fps:
            continue
        conj = pm.batch_conjugate(inst.rows, w)
        cbytes = [r.tobytes() for r in conj]
        pts = []
        for r, b in zip(conj, cbytes):
            i = model.central_index(r)
            if i is not None and model.centrals[i].tobytes() == b:
                pts.append(i)
        pset = frozenset(pts)
        for name, cont in containers.items():
            if all(b in cont for b in cbytes):
                out[name].append(pset)
    return out


def _point_action(model: SylowModel, gens, points: frozenset) -> list[dict]:
    maps = []
    for g in gens:
        conj = pm.batch_conjugate(model.centrals[sorted(points)], g)
        m = {}
        for i, row in zip(sorted(points), conj):
            j = model.central_index(row)
            if j is None or j not in points:
                raise VerifyError("normalizer does not preserve the point set")
            m[i] = j
        maps.append(m)
    return maps


def point_orbit_sizes(model: SylowModel, gens, points: frozenset) -> list[int]:
    maps = _point_action(model, gens, points)
    remaining = set(points)
    sizes = []
    while remaining:
        seed = min(remaining)
        orb = {seed}
        frontier = [seed]
        while frontier:
            nxt = []
            for i in frontier:
                for m in maps:
                    j = m[i]
                    if j not in orb:
                        orb.add(j)
                        nxt.append(j)
            frontier = nxt
        sizes.append(len(orb))
        remaining -= orb
    return sorted(sizes)


def set_orbit_sizes(model: SylowModel, gens,
                    items: list[frozenset]) -> list[int]:
    """Orbits of conjugation on a small collection of point sets."""
    pool = {s: k for k, s in enumerate(items)}
    maps = []
    all_points = frozenset().union(*items) if items else frozenset()
    pt_maps = _point_action(model, gens, all_points)
    for m in pt_maps:
        perm = []
        for s in items:
            img = frozenset(m[i] for i in s)
            if img not in pool:
                raise VerifyError("collection is not preserved")
            perm.append(pool[img])
        maps.append(perm)
    remaining = set(range(len(items)))
    sizes = []
    while remaining:
        seed = min(remaining)
        orb = {seed}
        frontier = [seed]
        while frontier:
            nxt = []
            for k in frontier:
                for m in maps:
                    j = m[k]
                    if j not in orb:
                        orb.add(j)
                        nxt.append(j)
            frontier = nxt
        sizes.append(len(orb))
        remaining -= orb
    return sorted(sizes)


# flag type, container, what N_G(container) acts on, expected orbit sizes
TABLE2_ROWS = [
    # rank 1
    (("p_sq",), "p_sq", "self", [1]),
    (("pM_sq",), "pM_sq", "self", [1]),
    (("pL_sq",), "pL_sq", "self", [1]),
    (("S",), "S", "self", [1]),
    # rank 2
    (("p", "p_sq"), "p_sq", "points:p_sq", [1, 30]),
    (("p", "pM_sq"), "pM_sq", "points:pM_sq", [1, 6, 8, 24]),
    (("p", "pL_sq"), "pL_sq", "points:pL_sq", [1, 2, 12, 16, 24]),
    (("p", "S"), "S", "points:S", [1, 2, 4, 8, 8, 16, 16]),
    (("M", "pM_sq"), "pM_sq", "mspaces", [1]),
    (("M", "pL_sq"), "pL_sq", "mspaces", [3]),
    (("M", "S"), "S", "mspaces", [1, 2]),
    (("Lst", "pL_sq"), "pL_sq", "lstructs", [1]),
    (("Lst", "S"), "S", "lstructs", [1]),
    (("p_sq", "pM_sq"), "pM_sq", "psqs", [1]),
    (("p_sq", "pL_sq"), "pL_sq", "psqs", [1]),
    (("p_sq", "S"), "S", "psqs", [1]),
    (("pM_sq", "S"), "S", "pmsqs", [1]),
    (("pL_sq", "S"), "S", "plsqs", [1]),
    # rank 3
    (("p", "M", "pM_sq"), "pM_sq", "points:m_union", [1, 6, 8]),
    (("p", "M", "pL_sq"), "pL_sq", "points:m_union", [1, 2, 12, 24]),
    (("p", "M", "S"), "S", "points:m_union", [1, 2, 4, 8, 8, 16]),
    (("p", "Lst", "pL_sq"), "pL_sq", "points:lstruct", [1, 2, 12, 24]),
    (("p", "Lst", "S"), "S", "points:lstruct", [1, 2, 4, 8, 8, 16]),
    (("p", "p_sq", "pL_sq"), "pL_sq", "points:p_sq", [1, 2, 12, 16]),
    (("p", "p_sq", "pM_sq"), "pM_sq", "points:p_sq", [1, 6, 24]),
    (("p", "p_sq", "S"), "S", "points:p_sq", [1, 2, 4, 8, 16]),
    (("p", "pM_sq", "S"), "S", "points:pM_sq", [1, 2, 4, 8, 8, 16]),
    (("p", "pL_sq", "S"), "S", "points:pL_sq", [1, 2, 4, 8, 8, 16, 16]),
    (("M", "Lst", "pL_sq"), "pL_sq", "mspaces", [3]),
    (("M", "Lst", "S"), "S", "mspaces", [1, 2]),
    (("M", "pM_sq", "S"), "S", "mspaces:pM_sq", [1]),
    (("M", "pL_sq", "S"), "S", "mspaces:pL_sq", [1, 2]),
    (("Lst", "pL_sq", "S"), "S", "lstructs", [1]),
    (("p_sq", "pL_sq", "S"), "S", "psqs", [1]),
    (("p_sq", "pM_sq", "S"), "S", "psqs", [1]),
    # rank 4
    (("p", "M", "Lst", "pL_sq"), "pL_sq", "points:lstruct", [1, 2, 12, 24]),
    (("p", "M", "Lst", "S"), "S", "points:lstruct", [1, 2, 4, 8, 8, 16]),
    (("p", "M", "pM_sq", "S"), "S", "points:m_union_pM_sq", [1, 2, 4, 8]),
    (("p", "M", "pL_sq", "S"), "S", "points:m_union_pL_sq", [1, 2, 4, 8, 8, 16]),
    (("p", "Lst", "pL_sq", "S"), "S", "points:lstruct", [1, 2, 4, 8, 8, 16]),
    (("p", "p_sq", "pM_sq", "S"), "S", "points:p_sq", [1, 2, 4, 8, 16]),
    (("p", "p_sq", "pL_sq", "S"), "S", "points:p_sq", [1, 2, 4, 8, 16]),
    (("M", "Lst", "pL_sq", "S"), "S", "mspaces", [1, 2]),
    # rank 5
    (("p", "M", "Lst", "pL_sq", "S"), "S", "points:lstruct", [1, 2, 4, 8, 8, 16]),
]


def table2_orbits(ctx: Co3Context, model: SylowModel,
                  instances: dict[str, RadicalInstance],
                  table1: Table1Result) -> Table2Result:
    containers = {
        name: {r.tobytes() for r in instances[name].rows}
        for name in ("p_sq", "pM", "M_sq", "pML", "ML_sq", "pM_sq", "pL_sq", "S")
    }

    # contained conjugate collections (point sets), verified exactly
    coll: dict[str, dict[str, list[frozenset]]] = {}
    for name in ("M", "L", "p_sq", "pM_sq", "pL_sq"):
        coll[name] = conjugates_inside(ctx, model, table1, instances[name],
                                       containers)

    # cross-checks against the labeled model structures
    if sorted(map(sorted, coll["M"]["S"])) != sorted(map(sorted, (
            model.M1, model.M2, model.M3))):
        raise VerifyError("M-spaces inside S are not M1, M2, M3")
    if coll["M"]["pM_sq"] != [model.M]:
        raise VerifyError("pM_sq should contain M alone")
    if sorted(map(sorted, coll["M"]["pL_sq"])) != sorted(map(sorted, (
            model.M1, model.M2, model.M3))):
        raise VerifyError("pL_sq should contain the three M-spaces")
    for cname in ("pL_sq", "S"):
        if coll["L"][cname] != [model.line_structure]:
            raise VerifyError(f"{cname} should contain a unique line structure")
    for cname in ("pM_sq", "pL_sq", "S"):
        if coll["p_sq"][cname] != [instances["p_sq"].point_idx]:
            raise VerifyError(f"{cname} should contain a unique quadrangle group")
    if len(coll["pM_sq"]["S"]) != 1 or len(coll["pL_sq"]["S"]) != 1:
        raise VerifyError("S should contain unique pM_sq and pL_sq")

    # named point sets
    psets = {
        "points:p_sq": instances["p_sq"].point_idx,
        "points:pM_sq": instances["pM_sq"].point_idx,
        "points:pL_sq": instances["pL_sq"].point_idx,
        "points:S": frozenset(range(CENTRAL_COUNT)),
        "points:lstruct": model.line_structure,
        "points:m_union_pM_sq": model.M,
        "points:m_union_pL_sq": model.line_structure,
    }

    def m_union(container: str) -> frozenset:
        return frozenset().union(*coll["M"][container]) \
            if coll["M"][container] else frozenset()

    rows_out: list[Table2Row] = []
    memo: dict[tuple, list[int]] = {}
    for flag, cont, kind, expected in TABLE2_ROWS:
        gens = table1.normalizers[cont].gens
        mkey = (cont, kind)
        if mkey in memo:
            sizes = memo[mkey]
        elif kind == "self":
            sizes = [1]
        elif kind == "points:m_union":
            sizes = point_orbit_sizes(model, gens, m_union(cont))
        elif kind.startswith("points:"):
            sizes = point_orbit_sizes(model, gens, psets[kind])
        elif kind == "mspaces":
            sizes = set_orbit_sizes(model, gens, coll["M"][cont])
        elif kind == "mspaces:pM_sq":
            sizes = set_orbit_sizes(model, gens, coll["M"]["pM_sq"])
        elif kind == "mspaces:pL_sq":
            sizes = set_orbit_sizes(model, gens, coll["M"]["pL_sq"])
        elif kind == "lstructs":
            sizes = set_orbit_sizes(model, gens, coll["L"][cont])
        elif kind == "psqs":
            sizes = set_orbit_sizes(model, gens, coll["p_sq"][cont])
        elif kind == "pmsqs":
            sizes = set_orbit_sizes(model, gens, coll["pM_sq"][cont])
        elif kind == "plsqs":
            sizes = set_orbit_sizes(model, gens, coll["pL_sq"][cont])
        else:
            raise VerifyError(f"unknown action kind {kind}")
        memo[mkey] = sizes
        rows_out.append(Table2Row(
            flag=flag, container=cont,
            normalizer_order=table1.row(cont).normalizer_order,
            orbit_sizes=sizes, expected=expected))
    return Table2Result(rows=rows_out, collections=coll)
