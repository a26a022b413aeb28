"""Exhaustive checks of the point-line geometry on the central involutions.

Points are the 170,775 central involutions; lines are the pure central
2^2 subgroups and M-spaces the pure central 2^4 subgroups.  Because the
group is transitive on points, on lines and on M-spaces (the latter two
facts are themselves verified here by orbit counting), each axiom can
be checked exhaustively against one base object while scanning the full
point class, which the vectorized sweeps below do.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import permutation as pm
from .context import Co3Context
from .sylow import SylowModel
from .verify import Table1Result, VerifyError


@dataclass
class GeometryReport:
    commuting_points: int           # points sharing a line with z
    lines_through_z: int
    m_spaces_through_z: int
    planes_through_z: int
    lines_in_m: int
    planes_in_m: int
    delta4_ok: bool
    delta5_ok: bool
    delta6_ok: bool
    plane_in_unique_m: bool
    product_closure_ok: bool
    line_orbit_single: bool
    m_space_orbit_single: bool
    noncentral_rule: str            # "exhaustive", "sampled" or "skipped"
    noncentral_rule_ok: bool | None
    lines_z: list = field(repr=False, default_factory=list)
    m_spaces: list = field(repr=False, default_factory=list)


def _commuting_mask(images: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rows of `images` that commute with the permutation x."""
    return (x[images] == images[:, x]).all(axis=1)


def _perp_mask(ctx: Co3Context, images: np.ndarray, x: np.ndarray,
               x_index: int) -> np.ndarray:
    """Rows collinear with x: commuting, with central product."""
    mask = _commuting_mask(images, x)
    rows = np.flatnonzero(mask)
    prods = images[rows][:, x]          # compose(x, q) row-wise
    good = ctx.class2A.contains_fp(ctx.fp.batch(prods))
    out = np.zeros(len(images), dtype=bool)
    out[rows[good]] = True
    out[x_index] = False
    return out


def geometry_axioms(ctx: Co3Context, model: SylowModel,
                    table1: Table1Result, *,
                    noncentral_mode: str = "sampled") -> GeometryReport:
    images = ctx.class2A.images
    if images is None:
        raise VerifyError("central class images are required")
    z_idx = int(ctx.class2A.index_of(ctx.z))

    # -- the residue of z: lines and product closure ---------------------
    comm = _commuting_mask(images, ctx.z)
    comm[z_idx] = False
    commuting_points = int(comm.sum())
    rows = np.flatnonzero(comm)
    prods = images[rows][:, ctx.z]
    prod_central = ctx.class2A.contains_fp(ctx.fp.batch(prods))
    product_closure_ok = bool(prod_central.all())
    # every q commuting with z spans a line {z, q, zq}
    prod_idx = np.array([ctx.class2A.index_of(r) for r in prods])
    lines_z = {frozenset((z_idx, int(q), int(p)))
               for q, p in zip(rows, prod_idx)}
    lines_z = sorted(lines_z, key=sorted)
    if len(lines_z) != 315:
        raise VerifyError(f"{len(lines_z)} lines through z, expected 315")

    m_spaces = table1.m_spaces_z
    for s in m_spaces:
        if z_idx not in s:
            raise VerifyError("M-space list does not pass through z")

    # transitivity by orbit counting: the stabilizer orders pin the
    # C(z)-orbit sizes, which match the full residue counts
    cz = table1.stabilizer_orders["p"]
    line_orbit_single = cz // table1.stabilizer_orders["pL"] == len(lines_z)
    m_space_orbit_single = cz // table1.stabilizer_orders["pM"] == len(m_spaces)

    # -- (Delta 4): p-perp meets a line in 0, 1 or 3 points --------------
    base_line = [images[i] for i in sorted(
        int(ctx.class2A.index_of(model.centrals[i])) for i in model.L)]
    counts = np.zeros(len(images), dtype=np.int8)
    for x in base_line:
        xi = int(ctx.class2A.index_of(x))
        perp = _perp_mask(ctx, images, x, xi)
        perp[xi] = True          # a point is collinear with itself here
        counts += perp
    on_line = [int(ctx.class2A.index_of(x)) for x in base_line]
    counts[on_line] = 3
    delta4_ok = bool(np.isin(counts, (0, 1, 3)).all())

    # -- (Delta 5): p-perp meets an M-space in 0, 1 or 3 points,
    #    and any 3 form a line of the M-space -----------------------------
    m_points = sorted(int(ctx.class2A.index_of(model.centrals[i]))
                      for i in sorted(model.M))
    bits = np.zeros(len(images), dtype=np.int32)
    for k, i in enumerate(m_points):
        perp = _perp_mask(ctx, images, images[i], i)
        bits |= perp.astype(np.int32) << k
    in_m = np.zeros(len(images), dtype=bool)
    in_m[m_points] = True
    pop = np.array([bin(v).count("1") for v in range(1 << 15)], dtype=np.int8)
    hit = pop[bits[~in_m]]
    delta5_ok = bool(np.isin(hit, (0, 1, 3)).all())
    # lines of the M-space as 15-bit masks over its ordered points
    pos = {idx: k for k, idx in enumerate(m_points)}
    m_lines = set()
    for a in range(15):
        for b in range(a + 1, 15):
            i, j = m_points[a], m_points[b]
            prod = images[j][images[i]]        # compose(q_i, q_j)
            pk = int(ctx.class2A.index_of(prod))
            if pk in pos:
                m_lines.add((1 << a) | (1 << b) | (1 << pos[pk]))
    if len(m_lines) != 35:
        raise VerifyError(f"{len(m_lines)} lines in the base M-space")
    triples = bits[~in_m][hit == 3]
    delta5_ok = delta5_ok and bool(np.isin(triples,
                                           np.fromiter(m_lines, dtype=np.int32)).all())

    # planes of the base M-space
    m_planes = set()
    for l1 in m_lines:
        for l2 in m_lines:
            if l1 < l2 and bin(l1 & l2).count("1") == 1:
                span = l1 | l2
                # close up: the 7-point subgroup generated by two lines
                members = [k for k in range(15) if span >> k & 1]
                full = set(members)
                for a in members:
                    for b in members:
                        if a < b:
                            prod = images[m_points[b]][images[m_points[a]]]
                            full.add(pos[int(ctx.class2A.index_of(prod))])
                if len(full) == 7:
                    m_planes.add(frozenset(full))
    planes_in_m = len(m_planes)
    if planes_in_m != 15:
        raise VerifyError(f"{planes_in_m} planes in the base M-space")

    # -- (Delta 6): two M-spaces through z share at most a line ----------
    delta6_ok = True
    ms = [set(s) for s in m_spaces]
    for a in range(len(ms)):
        for b in range(a + 1, len(ms)):
            if len(ms[a] & ms[b]) not in (1, 3):
                delta6_ok = False
    # any two M-spaces sharing a point conjugate to a pair through z,
    # and disjoint ones satisfy the axiom trivially

    # -- each plane through z lies in a unique M-space -------------------
    line_list = [tuple(sorted(s)) for s in lines_z]
    planes_z = set()
    n_lines = len(line_list)
    # pair up lines through z; a pure 2^3 through z is spanned by two of
    # its three lines, so every plane is found this way
    others = [tuple(i for i in t if i != z_idx) for t in line_list]
    for a in range(n_lines):
        qa1, qa2 = others[a]
        xa1, xa2 = images[qa1], images[qa2]
        for b in range(a + 1, n_lines):
            qb1, qb2 = others[b]
            if qb1 in (qa1, qa2):
                continue
            # the two lines span a plane iff representatives commute with
            # central products
            xb = images[qb1]
            if not (xb[xa1] == xa1[xb]).all():
                continue
            prod = xb[xa1]
            pk_fp = ctx.fp.one(prod)
            if not ctx.class2A.contains_fp(np.array([pk_fp]))[0]:
                continue
            pk = int(ctx.class2A.index_of(prod))
            prod2 = xb[xa2]
            if not (xb[xa2] == xa2[xb]).all():
                continue
            pk2_fp = ctx.fp.one(prod2)
            if not ctx.class2A.contains_fp(np.array([pk2_fp]))[0]:
                continue
            pk2 = int(ctx.class2A.index_of(prod2))
            plane = frozenset({z_idx, qa1, qa2, qb1, qb2, pk, pk2})
            if len(plane) == 7:
                planes_z.add(plane)
    plane_in_unique_m = all(
        sum(1 for s in m_spaces if p <= s) == 1 for p in planes_z)
    if len(planes_z) != 135 * 7:
        raise VerifyError(f"{len(planes_z)} planes through z")

    # -- products of a central with a commuting non-central involution
    #    are never central ------------------------------------------------
    noncentral_rule_ok: bool | None
    if noncentral_mode == "skipped":
        noncentral_rule_ok = None
    else:
        noncentral_rule_ok = _noncentral_products(ctx, mode=noncentral_mode)

    # lines inside the base M-space already counted above
    return GeometryReport(
        commuting_points=commuting_points,
        lines_through_z=len(lines_z),
        m_spaces_through_z=len(m_spaces),
        planes_through_z=len(planes_z),
        lines_in_m=len(m_lines),
        planes_in_m=planes_in_m,
        delta4_ok=delta4_ok,
        delta5_ok=delta5_ok,
        delta6_ok=delta6_ok,
        plane_in_unique_m=plane_in_unique_m,
        product_closure_ok=product_closure_ok,
        line_orbit_single=line_orbit_single,
        m_space_orbit_single=m_space_orbit_single,
        noncentral_rule=noncentral_mode,
        noncentral_rule_ok=noncentral_rule_ok,
        lines_z=lines_z,
        m_spaces=list(m_spaces),
    )


def _noncentral_products(ctx: Co3Context, *, mode: str,
                         samples: int = 400) -> bool:
    """z times a commuting non-central involution is never central.

    In sampled mode random elements of C(z) are powered down to
    involutions; exhaustive mode streams all of C(z).
    """
    idt = np.arange(ctx.degree)

    def bad(y: np.ndarray) -> bool:
        prod = y[ctx.z]
        return bool(ctx.class2A.contains(prod))

    if mode == "sampled":
        stream = ctx.centralizer_z.random_stream(ctx.seed + 7)
        checked = 0
        while checked < samples:
            g = next(stream)
            o = pm.perm_order(g)
            if o % 2:
                continue
            y = _power(g, o // 2)
            fixed = int((y == idt).sum())
            if fixed != ctx.fixed_count_noncentral:
                continue
            if bad(y):
                return False
            checked += 1
        return True
    if mode == "exhaustive":
        for batch in ctx.centralizer_z.element_batches():
            sq = np.take_along_axis(batch, batch, axis=1)
            is_inv = (sq == idt[None, :]).all(axis=1)
            fixed = (batch == idt[None, :]).sum(axis=1)
            sel = is_inv & (fixed == ctx.fixed_count_noncentral)
            cand = batch[sel]
            if len(cand):
                prods = cand[:, ctx.z]
                if ctx.class2A.contains_fp(ctx.fp.batch(prods)).any():
                    return False
        return True
    raise ValueError(f"unknown mode {mode!r}")


def _power(g: np.ndarray, k: int) -> np.ndarray:
    r = np.arange(len(g), dtype=g.dtype)
    while k:
        if k & 1:
            r = g[r]
        g = g[g]
        k >>= 1
    return r
