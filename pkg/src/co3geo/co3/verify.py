"""Normalizers, centralizers, radicality and centricity of the candidates.

The key reductions, each of which is justified computationally before
being used:

* If the only central involution in Z(R) is z, then N_G(R) fixes z and
  the normalizer can be computed by streaming C(z).
* N_G(M) and N_G(L) are built from their stabilizer-of-z part plus one
  extension element per further center point, found by a breadth-first
  search over conjugates; the resulting order is pinned exactly by the
  orbit-stabilizer identity.
* Every candidate is normalized by S and the 2-part of each normalizer
  order is |S|, so O_2(N_G(R)) equals the stable intersection of
  conjugates of S -- giving an exact radicality test.
* C_G(M) = M (verified by one stream), hence C_G(R) = Z(R) for every
  candidate containing M, which settles centricity for those rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import permutation as pm
from ..groups import PermGroup, centralizer_by_stream, normalizer_by_stream
from .context import Co3Context
from .model import RADICAL_NAMES, RadicalInstance
from .sylow import SylowModel

EXPECTED_NORMALIZERS = {
    "p": 2_903_040,      # 2 x Sp6(2)
    "M": 322_560,        # 2^4 x A8
    "p_sq": 46_080,
    "pM": 21_504,
    "M_sq": 21_504,
    "L": 27_648,
    "pML": 3_072,
    "ML_sq": 3_072,
    "pM_sq": 3_072,
    "pL_sq": 3_072,
    "S": 1_024,
}

EXPECTED_STABILIZERS = {
    "p": 2_903_040, "L": 27_648, "M": 322_560,
    "pL": 9_216, "pM": 21_504, "LM": 9_216, "pLM": 3_072,
}


class VerifyError(RuntimeError):
    pass


@dataclass
class Table1Row:
    name: str
    order: int
    center_involutions: int
    normalizer_order: int
    centralizer_order: int
    is_radical: bool
    is_centric: bool
    is_distinguished: bool


@dataclass
class Table1Result:
    rows: list[Table1Row]
    normalizers: dict[str, PermGroup]
    stabilizer_orders: dict[str, int]
    m_spaces_z: list[frozenset]     # the M-spaces through z, as 2A index sets
    invariants: dict[str, tuple]

    def row(self, name: str) -> Table1Row:
        return next(r for r in self.rows if r.name == name)


def _fp_key(ctx: Co3Context, rows: np.ndarray) -> frozenset:
    return frozenset(int(f) for f in ctx.fp.batch(rows))


def class_index_set(ctx: Co3Context, rows: np.ndarray) -> frozenset:
    """A subgroup's central involutions as indices into the 2A class."""
    fps = ctx.fp.batch(rows)
    mask = ctx.class2A.contains_fp(fps)
    return frozenset(int(ctx.class2A.index_of(r)) for r in rows[mask])


def cz_orbit_of_subgroup(ctx: Co3Context, rows: np.ndarray,
                         max_size: int = 4096):
    """The C(z)-orbit of a subgroup under conjugation.

    Yields (fingerprint key, conjugating permutation) pairs; each node
    stores only the word-product permutation, so memory stays small.
    """
    gens = ctx.centralizer_z.gens
    idt = pm.identity(ctx.degree)
    start = _fp_key(ctx, rows)
    seen = {start}
    out = [(start, idt)]
    frontier = [(rows, idt)]
    while frontier:
        nxt = []
        for cur_rows, w in frontier:
            for g in gens:
                conj = pm.batch_conjugate(cur_rows, g)
                key = _fp_key(ctx, conj)
                if key not in seen:
                    seen.add(key)
                    if len(seen) > max_size:
                        raise VerifyError("conjugate orbit exceeds bound")
                    w2 = pm.compose(w, g)
                    out.append((key, w2))
                    nxt.append((conj, w2))
        frontier = nxt
    return out


def m_spaces_through_z(ctx: Co3Context, model: SylowModel) -> list[frozenset]:
    """All conjugates of M containing z, as 2A-index sets.

    These form a single C(z)-orbit: the number of (conjugate, point)
    incidences gives |orbit| = |class of M| * 15 / |2A| which must match
    |C(z)| / |N_C(z)(M)| -- the caller cross-checks the count of 135.
    """
    rows = model.rows(model.M)
    orbit = cz_orbit_of_subgroup(ctx, rows, max_size=200)
    out = []
    seen = set()
    for _, w in orbit:
        conj = pm.batch_conjugate(rows, w)
        idx = frozenset(int(ctx.class2A.index_of(r)) for r in conj)
        if len(idx) != 15:
            raise VerifyError("conjugate of M lost points")
        if idx not in seen:
            seen.add(idx)
            out.append(idx)
    if len(out) != 135:
        raise VerifyError(f"{len(out)} conjugates of M through z, expected 135")
    return out


def _extend_normalizer(ctx: Co3Context, sub_rows: np.ndarray,
                       n_cz: PermGroup, other_points: list[np.ndarray],
                       expected_order: int) -> PermGroup:
    """N_G(X) from N_C(z)(X) for a pure central X containing z.

    For each further central involution q of X, an element n with
    z^n = q and X^n = X is sought as (class conjugator) * (element of
    C(q) found by BFS over conjugates of X).  The exact order follows
    from orbit-stabilizer: the stabilizer of z in N_G(X) is N_C(z)(X).
    """
    sub_key = _fp_key(ctx, sub_rows)
    sub_set = {r.tobytes() for r in sub_rows}
    gens = list(n_cz.gens)
    for q in other_points:
        g = ctx.conjugator_to(q)
        moved = pm.batch_conjugate(sub_rows, g)
        cq_gens = [pm.conjugate(h, g) for h in ctx.centralizer_z.gens]
        # BFS over the C(q)-orbit of X^g until X is hit
        idt = pm.identity(ctx.degree)
        seen = {_fp_key(ctx, moved)}
        frontier = [(moved, idt)]
        found = None
        while frontier and found is None:
            nxt = []
            for cur, w in frontier:
                for h in cq_gens:
                    conj = pm.batch_conjugate(cur, h)
                    key = _fp_key(ctx, conj)
                    if key in seen:
                        continue
                    seen.add(key)
                    w2 = pm.compose(w, h)
                    if key == sub_key:
                        found = w2
                        break
                    nxt.append((conj, w2))
                if found is not None:
                    break
            frontier = nxt
        if found is not None:
            n = pm.compose(g, found)
            check = pm.batch_conjugate(sub_rows, n)
            if {r.tobytes() for r in check} != sub_set:
                raise VerifyError("extension element does not normalize")
            gens.append(n)
            result = PermGroup(gens, ctx.degree)
            if result.order() == expected_order:
                return result
    raise VerifyError(
        f"normalizer extension reached order {PermGroup(gens, ctx.degree).order()}, "
        f"expected {expected_order}")


def _o2_equals(N: PermGroup, inst: RadicalInstance, model: SylowModel,
               seed: int, max_rounds: int = 200) -> bool:
    """Whether O_2(N) equals the candidate subgroup.

    Requires S <= N with |S| the full 2-part of |N| (checked by the
    caller), so O_2(N) lies in every conjugate of S.  The intersection
    of conjugates of S is shrunk by random elements of N until it is
    normal under the generators of N; at that point it equals O_2(N).
    """
    if N.order() % model.S.order() or (N.order() // model.S.order()) % 2 == 0:
        raise VerifyError("normalizer order does not have 2-part |S|")
    for g in model.S.gens:
        if not N.contains(g):
            raise VerifyError("S is not contained in the normalizer")
    rows = model.elements
    byteset = {r.tobytes() for r in rows}
    stream = N.random_stream(seed)
    for _ in range(max_rounds):
        normal = True
        for g in N.gens:
            conj = pm.batch_conjugate(rows, g)
            if any(r.tobytes() not in byteset for r in conj):
                normal = False
                break
        if normal:
            break
        g = next(stream)
        conj = pm.batch_conjugate(rows, g)
        cset = {r.tobytes() for r in conj}
        keep = np.fromiter((r.tobytes() in cset for r in rows),
                           dtype=bool, count=len(rows))
        rows = rows[keep]
        byteset = {r.tobytes() for r in rows}
    else:
        raise VerifyError("O_2 intersection did not stabilize")
    target = {r.tobytes() for r in inst.rows}
    return byteset == target


def verify_table1(ctx: Co3Context, model: SylowModel,
                  instances: dict[str, RadicalInstance],
                  cache=None) -> Table1Result:
    degree = ctx.degree
    Cz = ctx.centralizer_z
    fp = ctx.fp

    def inst_group(name: str) -> PermGroup:
        return PermGroup(instances[name].gens, degree)

    def cached_group(key: str, build) -> PermGroup:
        if cache is not None:
            hit = cache.get(f"norm-{key}")
            if hit is not None:
                return PermGroup(list(hit["gens"]), degree)
        grp = build()
        if cache is not None:
            cache.put(f"norm-{key}", gens=np.stack(grp.gens))
        return grp

    normalizers: dict[str, PermGroup] = {}

    # rows whose center meets the central class in z alone
    normalizers["p"] = Cz
    for name in ("p_sq", "pM", "pML", "pM_sq", "pL_sq", "S"):
        normalizers[name] = cached_group(
            name, lambda name=name: normalizer_by_stream(Cz, inst_group(name),
                                                         fpr=fp))

    # N_G(M) and N_G(L) via stabilizer-of-z plus extension
    m_rows = model.subgroup_rows(model.M)
    l_rows = model.subgroup_rows(model.L)
    n_cz_m = cached_group("pM_flag", lambda: normalizer_by_stream(
        Cz, PermGroup(list(model.rows(model.M)), degree), fpr=fp))
    n_cz_l = cached_group("pL_flag", lambda: normalizer_by_stream(
        Cz, PermGroup(list(model.rows(model.L)), degree), fpr=fp))
    if n_cz_m.order() != EXPECTED_STABILIZERS["pM"]:
        raise VerifyError(f"|N_C(z)(M)| = {n_cz_m.order()}")
    if n_cz_l.order() != EXPECTED_STABILIZERS["pL"]:
        raise VerifyError(f"|N_C(z)(L)| = {n_cz_l.order()}")
    m_others = [model.centrals[i] for i in sorted(model.M) if i != model.a1]
    l_others = [model.centrals[i] for i in sorted(model.L) if i != model.a1]
    normalizers["M"] = cached_group("M", lambda: _extend_normalizer(
        ctx, m_rows, n_cz_m, m_others, EXPECTED_NORMALIZERS["M"]))
    normalizers["L"] = cached_group("L", lambda: _extend_normalizer(
        ctx, l_rows, n_cz_l, l_others, EXPECTED_NORMALIZERS["L"]))

    # the box plane lies in a unique M-space, so N_G(M_sq) <= N_G(M)
    m_spaces = m_spaces_through_z(ctx, model)
    box = model.span([model.a1, model.a2, model.a3])
    box_idx = frozenset(int(ctx.class2A.index_of(model.centrals[i]))
                        for i in box)
    through_box = [s for s in m_spaces if box_idx <= s]
    m_idx = class_index_set(ctx, model.rows(model.M))
    if through_box != [m_idx]:
        raise VerifyError("box plane does not lie in a unique M-space")
    normalizers["M_sq"] = cached_group("M_sq", lambda: normalizer_by_stream(
        normalizers["M"], inst_group("M_sq"), fpr=fp))
    # Z(ML_sq) meets 2A in the line L, so N_G(ML_sq) <= N_G(L)
    normalizers["ML_sq"] = cached_group("ML_sq", lambda: normalizer_by_stream(
        normalizers["L"], inst_group("ML_sq"), fpr=fp))

    for name, N in normalizers.items():
        if N.order() != EXPECTED_NORMALIZERS[name]:
            raise VerifyError(
                f"|N_G({name})| = {N.order()}, expected {EXPECTED_NORMALIZERS[name]}")
        if name != "p":
            sub_set = {r.tobytes() for r in instances[name].rows}
            for g in N.gens:
                conj = pm.batch_conjugate(instances[name].rows, g)
                if any(r.tobytes() not in sub_set for r in conj):
                    raise VerifyError(f"generator of N_G({name}) fails to normalize")

    # C_G(M) = M: the centralizer of M inside C(z), computed exactly
    m_gens = [model.centrals[i]
              for i in (model.a1, model.a2, model.a3, model.a4)]
    c_m = cached_group("cent_M", lambda: centralizer_by_stream(Cz, m_gens))
    if c_m.order() != 16:
        raise VerifyError(f"|C_G(M)| = {c_m.order()}, expected 16")
    c_psq = cached_group("cent_p_sq", lambda: centralizer_by_stream(
        Cz, instances["p_sq"].gens))

    rows_out: list[Table1Row] = []
    invariants: dict[str, tuple] = {}
    for name in RADICAL_NAMES:
        inst = instances[name]
        N = normalizers[name]
        # centricity: is Z(R) a Sylow 2-subgroup of C_G(R)?
        m_bytes = {r.tobytes() for r in model.rows(model.M)}
        r_bytes = {r.tobytes() for r in inst.rows}
        if name == "p":
            cent_order = Cz.order()
        elif name == "p_sq":
            cent_order = c_psq.order()
        elif m_bytes <= r_bytes:
            # C_G(R) <= C_G(M) = M, hence C_G(R) = C_M(R) = Z(R)
            c_rows = [x for x in model.subgroup_rows(model.M)
                      if all(pm.commutes(x, g) for g in inst.gens)]
            cbytes = {r.tobytes() for r in c_rows}
            if cbytes != {r.tobytes() for r in inst.center_rows}:
                raise VerifyError(f"C_G({name}) differs from Z({name})")
            cent_order = len(c_rows)
        else:
            raise VerifyError(f"no centralizer route for {name}")
        z_order = inst.center_order
        quotient = cent_order // z_order
        if cent_order % z_order:
            raise VerifyError(f"|Z({name})| does not divide |C_G({name})|")
        is_centric = quotient % 2 == 1

        is_radical = _o2_equals(N, inst, model, seed=ctx.seed)
        n_mspaces = sum(
            1 for s in model.pure_subgroups
            if len(s) == 15 and all(model.centrals[i].tobytes() in r_bytes
                                    for i in s))
        inv = (inst.order, len(inst.center_point_idx),
               len(inst.point_idx), n_mspaces)
        invariants[name] = inv
        rows_out.append(Table1Row(
            name=name, order=inst.order,
            center_involutions=len(inst.center_point_idx),
            normalizer_order=N.order(), centralizer_order=cent_order,
            is_radical=is_radical, is_centric=is_centric,
            is_distinguished=len(inst.center_point_idx) > 0))

    if len(set(invariants.values())) != len(RADICAL_NAMES):
        raise VerifyError("conjugacy invariants of the candidates collide")

    # vertex and flag stabilizers of the (p, L, M) flag geometry at our
    # standard flag, for the Euler-characteristic computation
    stab = {
        "p": Cz.order(),
        "L": normalizers["L"].order(),
        "M": normalizers["M"].order(),
        "pL": n_cz_l.order(),
        "pM": n_cz_m.order(),
    }
    l_group = PermGroup(list(model.rows(model.L)), degree)
    g_lm = cached_group("LM_flag", lambda: normalizer_by_stream(
        normalizers["M"], l_group, fpr=fp))
    g_plm = cached_group("pLM_flag", lambda: normalizer_by_stream(
        n_cz_m, l_group, fpr=fp))
    stab["LM"] = g_lm.order()
    stab["pLM"] = g_plm.order()
    for key, expected in EXPECTED_STABILIZERS.items():
        if stab[key] != expected:
            raise VerifyError(
                f"stabilizer {key} has order {stab[key]}, expected {expected}")

    return Table1Result(rows=rows_out, normalizers=normalizers,
                        stabilizer_orders=stab, m_spaces_z=m_spaces,
                        invariants=invariants)
