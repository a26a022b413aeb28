"""Small-group regression corpus: S4, S5 and GL(3,2).

These groups are small enough for the brute-force subgroup machinery,
yet their 2-subgroup posets exercise every code path used on the big
group: radical/centric/distinguished flags, order complexes, collapses
and F2 homology.  The class tables double as golden files for the CLI.
"""

from __future__ import annotations

import numpy as np

from . import permutation as pm
from .collapse import greedy_collapse
from .complexes import order_complex
from .radicals import (SmallGroup, bouc_poset, distinguished_poset,
                       homotopy_compare, p_subgroups, quillen_poset)

CORPUS = ("s4", "s5", "gl32")


def _perm(images, degree):
    out = np.arange(degree, dtype=pm.DTYPE)
    for i, j in images.items():
        out[i] = j
    return out


def _cycle(points, degree):
    return _perm({a: b for a, b in zip(points, points[1:] + points[:1])},
                 degree)


def _gl32_gens():
    """GL(3,2) acting on the seven nonzero vectors of F2^3 (as bitmasks)."""
    def mat_perm(rows):
        # rows are the images of the basis vectors e1=1, e2=2, e3=4
        out = np.empty(7, dtype=pm.DTYPE)
        for v in range(1, 8):
            w = 0
            for b in range(3):
                if v >> b & 1:
                    w ^= rows[b]
            out[v - 1] = w - 1
        return out
    return [mat_perm([3, 2, 4]),    # transvection e1 -> e1+e2
            mat_perm([2, 4, 1])]    # cyclic basis rotation


def small_group(name: str) -> SmallGroup:
    if name == "s4":
        g = SmallGroup([_cycle([0, 1], 4), _cycle([0, 1, 2, 3], 4)], 4)
        expected = 24
    elif name == "s5":
        g = SmallGroup([_cycle([0, 1], 5), _cycle([0, 1, 2, 3, 4], 5)], 5)
        expected = 120
    elif name == "gl32":
        g = SmallGroup(_gl32_gens(), 7)
        expected = 168
    else:
        raise ValueError(f"unknown corpus group {name!r}")
    if g.order != expected:
        raise RuntimeError(f"{name}: order {g.order}, expected {expected}")
    return g


def class_table(name: str, p: int = 2) -> list[dict]:
    """Conjugacy classes of nontrivial p-subgroups with their flags.

    Rows are sorted by a conjugation-invariant key so the table is
    stable across runs and platforms.
    """
    group = small_group(name)
    rows = []
    for rec in p_subgroups(group, p):
        rows.append({
            "order": rec.order,
            "center_order": len(rec.center_keys),
            "normalizer_order": rec.normalizer_order,
            "centralizer_order": rec.centralizer_order,
            "radical": rec.is_radical,
            "centric": rec.is_centric,
            "distinguished": rec.is_distinguished,
            "elementary_abelian": rec.is_elementary_abelian,
        })
    rows.sort(key=lambda r: (r["order"], r["normalizer_order"],
                             r["centralizer_order"], r["center_order"],
                             r["radical"], r["centric"],
                             r["distinguished"], r["elementary_abelian"]))
    return rows


def poset_summary(name: str, p: int = 2) -> dict:
    """Betti data of the Quillen, Bouc and distinguished-Bouc complexes."""
    group = small_group(name)
    records = p_subgroups(group, p)
    bouc = bouc_poset(group, p, records)
    quillen = quillen_poset(group, p, records)
    dist = distinguished_poset(group, p, records)

    C = order_complex(bouc)
    euler = C.euler_reduced()
    betti = C.reduced_betti()
    cert = greedy_collapse(C)

    cmp_aq = homotopy_compare(quillen, bouc)
    cmp_d = homotopy_compare(dist, bouc)
    return {
        "group": name,
        "order": group.order,
        "classes": len(records),
        "bouc_euler": euler,
        "bouc_betti": betti,
        "bouc_collapses_to_point": cert.complete,
        "quillen_betti": cmp_aq["betti_1"],
        "quillen_matches_bouc": cmp_aq["equal"],
        "distinguished_matches_bouc": cmp_d["equal"],
    }
