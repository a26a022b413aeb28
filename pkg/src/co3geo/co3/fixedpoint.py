"""The subcomplex fixed by the base central involution, and its collapse.

The fixed set of z acting on the geometry consists of the stable
elements: 631 points (z and its perp), lines kept setwise -- either
pointwise-fixed or with two points swapped around a fixed one -- and
stable M-spaces, which meet the fixed points in 1, 3 or 15 points.

Contractibility is certified by a sequence of star removals, each
justified by exhibiting a cone apex in the residue: swapped lines first,
then M-spaces meeting the fixed set in a line, pointwise lines away from
the base point, M-spaces with a single fixed point, the remaining
points, and finally the star of the base point itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import permutation as pm
from ..collapse import CollapseCertificate, greedy_collapse, remove_star_if_cone
from ..complexes import Poset, order_complex
from .context import Co3Context
from .verify import Table1Result, VerifyError

_CHUNK = 16384


@dataclass
class FixedPointReport:
    fixed_points: int
    swapped_lines: int
    pointwise_lines: int
    lines_through_base: int
    m_spaces: int
    m_space_profile: dict           # fixed-point count -> how many
    n_simplices: int
    euler_reduced: int
    collapsed_to_point: bool
    certificate: CollapseCertificate        # greedy elementary collapses
    guided_certificate: CollapseCertificate  # staged cone removals
    betti_reduced: list

    @property
    def all_ok(self) -> bool:
        return (self.fixed_points == 631 and self.euler_reduced == 0
                and self.collapsed_to_point
                and self.guided_certificate.complete
                and not any(self.betti_reduced))


def _conjugation_permutation(ctx: Co3Context, g: np.ndarray) -> np.ndarray:
    """The permutation of the central class induced by conjugation by g."""
    images = ctx.class2A.images
    n = len(images)
    gi = pm.inverse(g)
    out = np.empty(n, dtype=np.int64)
    fp2idx = {int(f): i for i, f in enumerate(ctx.class2A.fingerprints)}
    for a in range(0, n, _CHUNK):
        conj = g[images[a:a + _CHUNK][:, gi]]
        for k, f in enumerate(ctx.fp.batch(conj)):
            out[a + k] = fp2idx[int(f)]
    return out


def delta_fixed_z(ctx: Co3Context, table1: Table1Result) -> FixedPointReport:
    images = ctx.class2A.images
    if images is None:
        raise VerifyError("central class images are required")
    n = len(images)
    z_idx = int(ctx.class2A.index_of(ctx.z))
    fp2idx = {int(f): i for i, f in enumerate(ctx.class2A.fingerprints)}

    zperm = _conjugation_permutation(ctx, ctx.z)
    fixed = np.flatnonzero(zperm == np.arange(n))
    if len(fixed) != 631:
        raise VerifyError(f"{len(fixed)} fixed points, expected 631")
    fixset = {int(i) for i in fixed}

    # -- stable lines -----------------------------------------------------
    swapped: list[tuple] = []           # (moved, moved-partner, fixed point)
    moved = np.flatnonzero(zperm > np.arange(n))
    for a in range(0, len(moved), _CHUNK):
        idx = moved[a:a + _CHUNK]
        A = images[idx]
        B = images[zperm[idx]]
        P1 = np.take_along_axis(B, A, axis=1)
        comm = (P1 == np.take_along_axis(A, B, axis=1)).all(axis=1)
        rows = np.flatnonzero(comm)
        if not len(rows):
            continue
        fps = ctx.fp.batch(P1[rows])
        central = ctx.class2A.contains_fp(fps)
        for r, f, c in zip(rows, fps, central):
            if c:
                i = int(idx[r])
                swapped.append((i, int(zperm[i]), fp2idx[int(f)]))
    for _, _, k in swapped:
        if k not in fixset:
            raise VerifyError("third point of a swapped line is not fixed")

    plines: set[frozenset] = set()
    F = images[fixed]
    for i in fixed:
        x = images[i]
        comm = (x[F] == F[:, x]).all(axis=1)
        rows = np.flatnonzero(comm)
        prods = F[rows][:, x]
        fps = ctx.fp.batch(prods)
        central = ctx.class2A.contains_fp(fps)
        for r, f, c in zip(rows, fps, central):
            j = int(fixed[r])
            if c and j != int(i):
                plines.add(frozenset((int(i), j, fp2idx[int(f)])))
    for l in plines:
        if not l <= fixset:
            raise VerifyError("product point of a fixed line is not fixed")
    lines_z = sum(1 for l in plines if z_idx in l)
    if lines_z != 315:
        raise VerifyError(f"{lines_z} fixed lines through z, expected 315")

    # -- stable M-spaces ----------------------------------------------------
    # every stable M-space holds a fixed point (15 is odd), and the
    # M-spaces through any point are the transports of those through z
    base = [sorted(s) for s in table1.m_spaces_z]
    flat = images[np.concatenate([np.array(s) for s in base])]
    stable_ms: set[frozenset] = set()
    for i in fixed:
        w = ctx.class2A.conjugator(int(i))
        conj = pm.batch_conjugate(flat, w)
        idxs = [fp2idx[int(f)] for f in ctx.fp.batch(conj)]
        pos = 0
        for s in base:
            cand = frozenset(idxs[pos:pos + len(s)])
            pos += len(s)
            if cand in stable_ms:
                continue
            if all(zperm[j] in cand for j in cand):
                stable_ms.add(cand)
    profile: dict[int, int] = {}
    m_lines: dict[frozenset, frozenset] = {}
    for s in stable_ms:
        k = len(s & fixset)
        profile[k] = profile.get(k, 0) + 1
        if k not in (1, 3, 15):
            raise VerifyError(f"stable M-space with {k} fixed points")
        if k == 15 and z_idx not in s:
            raise VerifyError("fully fixed M-space misses z")
        if k == 3:
            tri = frozenset(s & fixset)
            if tri not in plines:
                raise VerifyError("three fixed points of an M-space are not a line")
            m_lines[s] = tri
    if profile.get(15, 0) != 135:
        raise VerifyError("wrong number of M-spaces through z")

    # -- the order complex of the stable elements ---------------------------
    # ids: points 0..630; then lines; then M-spaces
    pt_id = {int(i): k for k, i in enumerate(sorted(fixset))}
    lines: list[tuple[frozenset, frozenset]] = []      # (all 3, stable points)
    for l in sorted(map(sorted, plines)):
        lines.append((frozenset(l), frozenset(l)))
    for i, j, k in sorted(swapped):
        lines.append((frozenset((i, j, k)), frozenset((k,))))
    line_base = len(pt_id)
    m_list = sorted(map(sorted, stable_ms))
    m_base = line_base + len(lines)

    P = Poset()
    for i in pt_id.values():
        P.add_element(i, 0)
    by_point: dict[int, list[int]] = {}
    for k, (full, stable) in enumerate(lines):
        P.add_element(line_base + k, 1)
        for q in stable:
            P.add_relation(pt_id[q], line_base + k)
            by_point.setdefault(q, []).append(k)
    for mi, s in enumerate(m_list):
        P.add_element(m_base + mi, 2)
        sset = frozenset(s)
        cands = set()
        for q in sset & fixset:
            P.add_relation(pt_id[q], m_base + mi)
            cands.update(by_point.get(q, []))
        for k in cands:
            if lines[k][0] <= sset:
                P.add_relation(line_base + k, m_base + mi)
    C = order_complex(P)
    n_simplices = C.n_simplices()
    euler = C.euler_reduced()

    # greedy elementary collapses on one copy; homology is read off the
    # remainder, so the Betti numbers are exact whether or not it closes
    G = order_complex(P)
    greedy_cert = greedy_collapse(G)
    betti = G.reduced_betti() if G.n_simplices() > 1 else [0]

    # -- guided collapse, staged as in the contractibility proof ------------
    cert = CollapseCertificate()

    def star_out(vs):
        for v in vs:
            remove_star_if_cone(C, v)
            cert.record_star(v)

    swapped_ids = [line_base + k for k, (full, st) in enumerate(lines)
                   if len(st) == 1]
    star_out(swapped_ids)
    star_out([m_base + mi for mi, s in enumerate(m_list)
              if len(frozenset(s) & fixset) == 3])
    star_out([line_base + k for k, (full, st) in enumerate(lines)
              if len(st) == 3 and z_idx not in st])
    star_out([m_base + mi for mi, s in enumerate(m_list)
              if len(frozenset(s) & fixset) == 1])
    star_out([pt_id[q] for q in sorted(fixset) if q != z_idx])
    star_out([line_base + k for k, (full, st) in enumerate(lines)
              if z_idx in st])
    star_out([m_base + mi for mi, s in enumerate(m_list)
              if z_idx in frozenset(s)])
    cert.finish(C)
    if not cert.complete or C.vertices() != [pt_id[z_idx]]:
        raise VerifyError("fixed-point complex did not collapse to the base point")

    return FixedPointReport(
        fixed_points=len(fixset),
        swapped_lines=len(swapped),
        pointwise_lines=len(plines),
        lines_through_base=lines_z,
        m_spaces=len(stable_ms),
        m_space_profile=profile,
        n_simplices=n_simplices,
        euler_reduced=euler,
        collapsed_to_point=greedy_cert.complete,
        certificate=greedy_cert,
        guided_certificate=cert,
        betti_reduced=betti,
    )
