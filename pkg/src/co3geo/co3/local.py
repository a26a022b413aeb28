"""Replay of the collapse schedule on the local flag complex.

The candidates contained in a fixed Sylow group S form 63 subgroups: 55
points, three M-spaces, the line structure group, and the quadrangle,
pM-square, pL-square and Sylow groups themselves (each unique in S).
Chains of these that involve a square-type group are exactly the local
representatives of the flags that must be removed to reach the reduced
poset.

The removal schedule is a sequence of 35 steps followed by a final
cleanup; each step removes matched pairs (Sigma, sigma) where Sigma is a
maximal simplex free over its face sigma.  Both conditions are verified
against the *global* complex: cofaces through containers outside S are
enumerated exactly, by conjugating the local copies with normalizer
elements and transporting the face back into S, where liveness can be
read off the local state (removals are orbitwise, so liveness is a
G-orbit invariant).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import permutation as pm
from .context import Co3Context
from .model import RadicalInstance
from .sylow import CENTRAL_COUNT, SylowModel
from .verify import Table1Result, VerifyError

# vertex ids
M_BASE = CENTRAL_COUNT                 # 55, 56, 57: the three M-spaces
V_LST, V_PSQ, V_PMSQ, V_PLSQ, V_SY = 58, 59, 60, 61, 62
N_VERTICES = 63

_ORDER = {V_LST: 256, V_PSQ: 64, V_PMSQ: 512, V_PLSQ: 512, V_SY: 1024}


def _vertex_order(v: int) -> int:
    if v < M_BASE:
        return 2
    if v < V_LST:
        return 16
    return _ORDER[v]


def _type_of(v: int) -> str:
    if v < M_BASE:
        return "p"
    if v < V_LST:
        return "M"
    return {V_LST: "Lst", V_PSQ: "p_sq", V_PMSQ: "pM_sq",
            V_PLSQ: "pL_sq", V_SY: "S"}[v]


@dataclass
class ExternalFamily:
    """Conjugates of one container type lying over a fixed local vertex."""
    local_vertex: int
    members: list                       # (w, w_inverse) pairs, local copy excluded
    expected: int

    @property
    def count(self) -> int:
        return len(self.members) + 1


@dataclass
class StepRecord:
    number: int
    removed: int
    restricted: int
    ok: bool


@dataclass
class LocalCollapseReport:
    n_vertices: int
    n_box_flags: int
    external_counts: dict
    steps: list[StepRecord]
    delta2_remaining: int
    cleanup_removed: int
    final_remaining: int

    @property
    def all_ok(self) -> bool:
        return (all(s.ok for s in self.steps)
                and self.delta2_remaining == 44
                and self.final_remaining == 0)


class LocalComplex:
    """The chains of candidate subgroups inside the fixed Sylow group."""

    def __init__(self, ctx: Co3Context, model: SylowModel,
                 instances: dict[str, RadicalInstance],
                 table1: Table1Result):
        self.ctx = ctx
        self.model = model
        self.inst = instances
        self.table1 = table1
        self.p1 = model.a1

        self.m_sets = [model.M1, model.M2, model.M3]
        self.points_of = {
            V_LST: model.line_structure,
            V_PSQ: instances["p_sq"].point_idx,
            V_PMSQ: instances["pM_sq"].point_idx,
            V_PLSQ: frozenset(range(CENTRAL_COUNT)),
            V_SY: frozenset(range(CENTRAL_COUNT)),
        }
        self._build_order()
        self._enumerate_flags()
        self._enumerate_externals()

    # -- poset -----------------------------------------------------------

    def _build_order(self) -> None:
        """Containment among the 63 subgroups, from the actual elements."""
        inst, model = self.inst, self.model
        big_rows = {V_LST: inst["L"].rows, V_PSQ: inst["p_sq"].rows,
                    V_PMSQ: inst["pM_sq"].rows, V_PLSQ: inst["pL_sq"].rows,
                    V_SY: inst["S"].rows}
        big_bytes = {v: {r.tobytes() for r in rows}
                     for v, rows in big_rows.items()}
        m_rows = [model.subgroup_rows(s) for s in self.m_sets]

        leq = [set() for _ in range(N_VERTICES)]   # leq[v] = {u : v <= u}
        for i in range(CENTRAL_COUNT):
            for k, s in enumerate(self.m_sets):
                if i in s:
                    leq[i].add(M_BASE + k)
            for v, pts in self.points_of.items():
                if i in pts:
                    leq[i].add(v)
        for k in range(3):
            for v, bb in big_bytes.items():
                if all(r.tobytes() in bb for r in m_rows[k]):
                    leq[M_BASE + k].add(v)
        for a in big_rows:
            for b, bb in big_bytes.items():
                if a != b and all(r.tobytes() in bb for r in big_rows[a]):
                    leq[a].add(b)
        # the expected shape of the containment order
        if leq[M_BASE] != {V_LST, V_PMSQ, V_PLSQ, V_SY}:
            raise VerifyError("unexpected order above the normal M-space")
        for k in (1, 2):
            if leq[M_BASE + k] != {V_LST, V_PLSQ, V_SY}:
                raise VerifyError("unexpected order above an M-space")
        if leq[V_LST] != {V_PLSQ, V_SY} or \
                leq[V_PSQ] != {V_PMSQ, V_PLSQ, V_SY} or \
                leq[V_PMSQ] != {V_SY} or leq[V_PLSQ] != {V_SY}:
            raise VerifyError("unexpected order among the square-type groups")
        self.leq = leq
        comparable = [set() for _ in range(N_VERTICES)]
        for v in range(N_VERTICES):
            for u in leq[v]:
                comparable[v].add(u)
                comparable[u].add(v)
        self.comparable = comparable

    def _enumerate_flags(self) -> None:
        box = (V_PSQ, V_PMSQ, V_PLSQ, V_SY)
        flags = []

        def extend(chain: tuple, start: int):
            for v in range(start, N_VERTICES):
                if all(v in self.comparable[u] for u in chain):
                    new = chain + (v,)
                    if any(u in box for u in new):
                        flags.append(frozenset(new))
                    extend(new, v + 1)

        extend((), 0)
        self.all_box_flags = flags
        self.live: set[frozenset] = set(flags)
        self.by_top: dict[int, set] = {v: set() for v in box}
        for f in flags:
            self.by_top[self.top(f)].add(f)

    @staticmethod
    def top(flag: frozenset) -> int:
        return max(flag, key=_vertex_order)

    # -- external containers ----------------------------------------------

    def _orbit_with_words(self, rows: np.ndarray, gens,
                          max_size: int) -> list:
        ctx = self.ctx
        idt = pm.identity(ctx.degree)
        key0 = frozenset(int(f) for f in ctx.fp.batch(rows))
        seen = {key0}
        out = []
        frontier = [(rows, idt)]
        while frontier:
            nxt = []
            for cur, w in frontier:
                for g in gens:
                    conj = pm.batch_conjugate(cur, g)
                    key = frozenset(int(f) for f in ctx.fp.batch(conj))
                    if key not in seen:
                        seen.add(key)
                        if len(seen) > max_size:
                            raise VerifyError("container orbit exceeds bound")
                        w2 = pm.compose(w, g)
                        out.append(w2)
                        nxt.append((conj, w2))
            frontier = nxt
        return out

    def _enumerate_externals(self) -> None:
        """All containers of each type over p_sq, pM_sq and pL_sq.

        The counts are pinned by an incidence count: #X-conjugates over V
        equals |N_G(V)| / |N_G(X)| times the number of V-conjugates in X,
        and the latter is 1 in every case used here.  A breadth-first
        search under N_G(V) must therefore find exactly that many.
        """
        t1, inst = self.table1, self.inst
        specs = [
            (V_PSQ, V_SY, inst["S"].rows, 45),
            (V_PSQ, V_PLSQ, inst["pL_sq"].rows, 15),
            (V_PSQ, V_PMSQ, inst["pM_sq"].rows, 15),
            (V_PMSQ, V_SY, inst["S"].rows, 3),
            (V_PLSQ, V_SY, inst["S"].rows, 3),
        ]
        fams: dict[int, list[ExternalFamily]] = {V_PSQ: [], V_PMSQ: [],
                                                 V_PLSQ: [], V_SY: []}
        counts = {}
        for base, xtype, rows, expected in specs:
            gens = t1.normalizers[_type_of(base)].gens
            words = self._orbit_with_words(rows, gens, expected + 1)
            if len(words) + 1 != expected:
                raise VerifyError(
                    f"{len(words) + 1} containers of type {_type_of(xtype)} "
                    f"over {_type_of(base)}, expected {expected}")
            fams[base].append(ExternalFamily(
                local_vertex=xtype,
                members=[(w, pm.inverse(w)) for w in words],
                expected=expected))
            counts[(_type_of(base), _type_of(xtype))] = expected
        self.families = fams
        self.external_counts = counts

    # -- transport ---------------------------------------------------------

    def translate(self, flag: frozenset, w_inv: np.ndarray) -> frozenset:
        """Image of a local flag under conjugation, as a local flag.

        Valid whenever the image lies back inside S: points map to
        points, M-spaces to M-spaces, and the unique-in-S containers to
        themselves.
        """
        model = self.model
        out = set()
        for v in flag:
            if v < M_BASE:
                j = model.central_index(pm.conjugate(model.centrals[v], w_inv))
                if j is None:
                    raise VerifyError("transported point left the Sylow group")
                out.add(j)
            elif v < V_LST:
                img = set()
                for i in self.m_sets[v - M_BASE]:
                    j = model.central_index(
                        pm.conjugate(model.centrals[i], w_inv))
                    if j is None:
                        raise VerifyError("transported M-space left the Sylow group")
                    img.add(j)
                out.add(M_BASE + self.m_sets.index(frozenset(img)))
            else:
                out.add(v)      # unique of its type in S
        return frozenset(out)

    # -- cofaces ------------------------------------------------------------

    def cofaces(self, flag: frozenset):
        """Live cofaces of a flag in the full (global) complex.

        Returns (local cofaces, number of external cofaces).  External
        cofaces have their largest member outside S; each is transported
        back into S and its liveness read from the local state.
        """
        local = [d for d in self.live if d > flag]
        ext = 0
        for fam in self.families.get(self.top(flag), []):
            for _, wi in fam.members:
                tau = self.translate(flag, wi)
                for d in self.by_top[fam.local_vertex]:
                    if d >= tau:
                        ext += 1
        return local, ext

    def remove(self, flag: frozenset) -> None:
        self.live.remove(flag)
        self.by_top[self.top(flag)].discard(flag)


# -- the schedule ------------------------------------------------------------
# Each entry: step number, sigma type (tuple of vertex kinds), the kind of
# vertex whose insertion gives Sigma, the point filter, an M-space
# restriction for sigma, expected pair count and expected local pairs.

def _schedule(cx: LocalComplex):
    md, inst = cx.model, cx.inst
    allp = frozenset(range(CENTRAL_COUNT))
    psq = inst["p_sq"].point_idx
    lst = md.line_structure
    L = md.L
    b = [s & psq for s in cx.m_sets]            # the three boxes
    b23 = (b[1] | b[2]) - L
    p1 = frozenset({md.a1})
    m1 = cx.m_sets[0]

    S = [
        (1,  ("p", "M", "Lst", "S"), "pL_sq", allp, None, 45, 45),
        (2,  ("M", "Lst", "S"), "pL_sq", None, None, 3, 3),
        (3,  ("p", "Lst", "S"), "pL_sq", lst, None, 39, 39),
        (4,  ("Lst", "S"), "pL_sq", None, None, 1, 1),
        (5,  ("p", "pL_sq", "S"), "M", allp - psq, None, 24, 24),
        (6,  ("p", "pL_sq", "S"), "p_sq", psq - lst, None, 16, 16),
        (7,  ("p", "pM_sq", "S"), "p_sq", psq - m1, None, 24, 24),
        (8,  ("p", "pM_sq", "S"), "M1", m1 - psq, None, 8, 8),
        (9,  ("p", "Lst", "pL_sq"), "M", lst - L, None, 36, 36),
        (10, ("p", "pL_sq"), "M", allp - psq, None, 24, 24),
        (11, ("p", "pL_sq"), "p_sq", psq - lst, None, 16, 16),
        (12, ("p", "pM_sq"), "p_sq", psq - m1, None, 24, 24),
        (13, ("p", "pM_sq"), "M1", m1 - psq, None, 8, 8),
        (14, ("p", "p_sq", "S"), "pL_sq", b23, None, 8, 8),
        (15, ("p", "pL_sq", "S"), "M", b23, None, 8, 8),
        (16, ("p", "S"), "p_sq", psq - lst, None, 16, 16),
        (17, ("p", "S"), "M", lst - psq, None, 24, 24),
        (18, ("p", "S"), "M", b23, None, 8, 8),
        (19, ("p", "M", "S"), "pL_sq", L, (1, 2), 6, 6),
        (20, ("p", "p_sq", "pL_sq"), "S", (lst & psq) - L, None, 12, 4),
        (21, ("p", "pL_sq", "S"), "M1", b[0] - L, None, 4, 4),
        (22, ("p", "p_sq", "S"), "pM_sq", b[0] - L, None, 4, 4),
        (23, ("p", "pM_sq", "S"), "M1", b[0] - L, None, 4, 4),
        (24, ("p", "M1", "pM_sq"), "S", b[0] - p1, None, 6, 2),
        (25, ("p", "p_sq", "pM_sq"), "S", b[0] - p1, None, 6, 2),
        (26, ("p", "M1", "S"), "pL_sq", L - p1, None, 2, 2),
        (27, ("p", "p_sq", "S"), "pL_sq", L - p1, None, 2, 2),
        (28, ("p", "M", "pL_sq"), "Lst", L - p1, None, 6, 6),
        (29, ("p", "pL_sq"), "M", (lst & psq) - L, None, 12, 12),
        (30, ("p", "pM_sq"), "S", b[0] - p1, None, 6, 2),
        (31, ("p", "S"), "M1", b[0] - L, None, 4, 4),
        (32, ("p", "S"), "pL_sq", L - p1, None, 2, 2),
        (33, ("M", "S"), "pL_sq", None, (1, 2), 2, 2),
        (34, ("p", "p_sq"), "pL_sq", psq - p1, None, 30, 2),
        (35, ("p", "pL_sq"), "Lst", L - p1, None, 2, 2),
    ]
    return S


_KIND_VERTEX = {"Lst": V_LST, "p_sq": V_PSQ, "pM_sq": V_PMSQ,
                "pL_sq": V_PLSQ, "S": V_SY, "M1": M_BASE}


def _sigma_flags(cx: LocalComplex, types, pfilter, msel):
    """Live flags matching a step's sigma pattern."""
    fixed = [_KIND_VERTEX[t] for t in types if t not in ("p", "M")]
    want_p = "p" in types
    want_m = "M" in types
    out = []
    for f in cx.live:
        if len(f) != len(types) or not all(v in f for v in fixed):
            continue
        pts = [v for v in f if v < M_BASE]
        ms = [v for v in f if M_BASE <= v < V_LST and v not in fixed]
        if want_p:
            if len(pts) != 1 or pts[0] not in pfilter:
                continue
        elif pts:
            continue
        if want_m:
            if len(ms) != 1:
                continue
            if msel is not None and ms[0] - M_BASE not in msel:
                continue
        elif ms:
            continue
        out.append(f)
    return out


def _sigma_to_sigma_pair(cx: LocalComplex, f: frozenset, add_kind: str):
    """The vertex whose insertion into sigma yields Sigma, if local."""
    if add_kind == "M":
        pts = [v for v in f if v < M_BASE]
        homes = [k for k, s in enumerate(cx.m_sets) if pts[0] in s]
        if len(homes) != 1:
            raise VerifyError("point does not select a unique M-space")
        return M_BASE + homes[0]
    return _KIND_VERTEX[add_kind]


def replay_collapse(ctx: Co3Context, model: SylowModel,
                    instances: dict[str, RadicalInstance],
                    table1: Table1Result) -> LocalCollapseReport:
    cx = LocalComplex(ctx, model, instances, table1)
    n_flags = len(cx.all_box_flags)
    steps: list[StepRecord] = []

    for (num, types, add, pfilter, msel, expected, expected_local) \
            in _schedule(cx):
        sigmas = _sigma_flags(cx, types, pfilter, msel)
        if len(sigmas) != expected:
            raise VerifyError(
                f"step {num}: {len(sigmas)} faces match, expected {expected}")
        pairs = []
        restricted = []
        for s in sigmas:
            v = _sigma_to_sigma_pair(cx, s, add)
            big = s | {v}
            if big in cx.live:
                pairs.append((big, s))
            else:
                restricted.append(s)
        if len(pairs) != expected_local:
            raise VerifyError(
                f"step {num}: {len(pairs)} local pairs, expected {expected_local}")
        ok = True
        for big, s in pairs:
            loc, ext = cx.cofaces(big)
            if loc or ext:
                raise VerifyError(f"step {num}: maximal simplex has cofaces")
            loc, ext = cx.cofaces(s)
            if ext or len(loc) != 1 or loc[0] != big:
                raise VerifyError(f"step {num}: face is not free")
        for s in restricted:
            # the pairing partner lies in a conjugate container outside S
            loc, ext = cx.cofaces(s)
            if loc or ext != 1:
                raise VerifyError(
                    f"step {num}: restricted face has {len(loc)} local and "
                    f"{ext} external cofaces")
        for big, s in pairs:
            cx.remove(big)
            cx.remove(s)
        for s in restricted:
            cx.remove(s)
        steps.append(StepRecord(number=num,
                                removed=2 * len(pairs) + len(restricted),
                                restricted=len(restricted), ok=ok))

    delta2 = len(cx.live)

    # final cleanup: every remaining flag pairs with its extension by the
    # base point, largest simplices first
    p1 = model.a1
    cleanup = 0
    while cx.live:
        with_p1 = [f for f in cx.live if p1 in f]
        if not with_p1:
            raise VerifyError("cleanup stalled: no flags through the base point")
        dim = max(len(f) for f in with_p1)
        progress = False
        for big in [f for f in with_p1 if len(f) == dim]:
            s = big - {p1}
            if s not in cx.live and len(s) > 0:
                raise VerifyError("cleanup pair is missing its face")
            loc, ext = cx.cofaces(big)
            if loc or ext:
                continue
            if len(s):
                loc, ext = cx.cofaces(s)
                if ext or loc != [big]:
                    continue
                cx.remove(s)
                cleanup += 1
            cx.remove(big)
            cleanup += 1
            progress = True
        if not progress:
            raise VerifyError("cleanup stalled: no free pair available")

    return LocalCollapseReport(
        n_vertices=N_VERTICES,
        n_box_flags=n_flags,
        external_counts=cx.external_counts,
        steps=steps,
        delta2_remaining=delta2,
        cleanup_removed=cleanup,
        final_remaining=len(cx.live),
    )
