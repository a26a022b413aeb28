"""Typed simplicial complexes, posets and order complexes.

Vertices are small integers carrying a type tag.  Simplices are sorted
tuples in a hash set, with an incrementally maintained count of strict
cofaces per simplex: a simplex is maximal iff its count is zero, and a
face sigma is an elementary free face iff its count is one (the unique
coface is then automatically maximal and of codimension one).  These
counters make free-pair queries and collapse steps O(1).
"""

from __future__ import annotations

import hashlib
from itertools import combinations

from .gf2 import BitMatrix, betti_f2, reduced_betti_f2


def closure_of(s: tuple) -> list[tuple]:
    """All nonempty subtuples of a sorted tuple, the simplex included."""
    out = []
    for k in range(1, len(s) + 1):
        out.extend(combinations(s, k))
    return out


class TypedComplex:
    def __init__(self, flag_typed: bool = False):
        self.types: dict[int, object] = {}
        self.simplices: set[tuple] = set()
        self.coface_count: dict[tuple, int] = {}
        self.cofacets: dict[tuple, set] = {}  # codimension-1 cofaces
        self.star_index: dict[int, set] = {}  # vertex -> simplices on it
        self.flag_typed = flag_typed
        self.frozen = False

    # -- construction ----------------------------------------------------

    def _check_mutable(self):
        if self.frozen:
            raise RuntimeError("complex is frozen")

    def add_vertex(self, v: int, vtype=0) -> None:
        self._check_mutable()
        old = self.types.get(v)
        if old is not None and old != vtype:
            raise ValueError(f"vertex {v} already has type {old!r}")
        self.types[v] = vtype
        self.add_simplex((v,))

    def add_simplex(self, verts) -> None:
        """Insert a simplex and every face of it."""
        self._check_mutable()
        s = tuple(sorted(verts))
        if not s or len(set(s)) != len(s):
            raise ValueError(f"bad simplex {verts!r}")
        for v in s:
            self.types.setdefault(v, 0)
        if self.flag_typed:
            tags = [self.types[v] for v in s]
            if len(set(tags)) != len(tags):
                raise ValueError(f"simplex {s} repeats a vertex type")
        faces = closure_of(s)
        new = [f for f in faces if f not in self.simplices]
        if not new:
            return
        for f in new:
            self.simplices.add(f)
            self.coface_count[f] = 0
            self.cofacets[f] = set()
            for v in f:
                self.star_index.setdefault(v, set()).add(f)
        # a face-closed complex cannot already contain a coface of a face
        # that was absent, so all counting updates stay inside closure(s)
        new_set = set(new)
        for g in new:
            gs = set(g)
            for f in faces:
                if len(f) < len(g) and gs.issuperset(f):
                    self.coface_count[f] += 1
                    if len(g) == len(f) + 1:
                        self.cofacets[f].add(g)

    def remove_maximal(self, s) -> None:
        """Remove a simplex with no cofaces."""
        self._check_mutable()
        s = tuple(sorted(s))
        if self.coface_count.get(s) != 0:
            raise ValueError(f"{s} is not a maximal simplex")
        self.simplices.discard(s)
        del self.coface_count[s]
        del self.cofacets[s]
        for v in s:
            self.star_index[v].discard(s)
        for f in closure_of(s):
            if f != s and f in self.simplices:
                self.coface_count[f] -= 1
                if len(f) == len(s) - 1:
                    self.cofacets[f].discard(s)

    def remove_star(self, v: int) -> list[tuple]:
        """Remove every simplex containing v; returns them (sorted)."""
        self._check_mutable()
        doomed = sorted(self.star_index.get(v, ()), key=lambda s: (-len(s), s))
        # every coface of a star member also contains v and is larger, so
        # removing largest-first keeps each removal maximal
        for s in doomed:
            self.remove_maximal(s)
        self.types.pop(v, None)
        self.star_index.pop(v, None)
        return doomed

    def freeze(self) -> "TypedComplex":
        self.frozen = True
        return self

    def copy(self) -> "TypedComplex":
        c = TypedComplex(self.flag_typed)
        c.types = dict(self.types)
        c.simplices = set(self.simplices)
        c.coface_count = dict(self.coface_count)
        c.cofacets = {k: set(v) for k, v in self.cofacets.items()}
        c.star_index = {k: set(v) for k, v in self.star_index.items()}
        return c

    # -- queries ----------------------------------------------------------

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.simplices

    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def n_simplices(self) -> int:
        return len(self.simplices)

    def vertices(self) -> list[int]:
        return sorted(v for v in self.star_index if self.star_index[v])

    def maximal_simplices(self) -> list[tuple]:
        return sorted(s for s, c in self.coface_count.items() if c == 0)

    def star(self, v: int) -> "TypedComplex":
        if v not in self.star_index or not self.star_index[v]:
            raise KeyError(f"vertex {v} not in complex")
        out = TypedComplex(self.flag_typed)
        for s in self.star_index[v]:
            if self.coface_count[s] == 0:
                for u in s:
                    out.types[u] = self.types[u]
                out.add_simplex(s)
        return out

    def residue(self, v: int) -> "TypedComplex":
        """The link of v: star simplices with v deleted."""
        if v not in self.star_index or not self.star_index[v]:
            raise KeyError(f"vertex {v} not in complex")
        out = TypedComplex(self.flag_typed)
        for s in self.star_index[v]:
            if self.coface_count[s] == 0 and len(s) > 1:
                t = tuple(u for u in s if u != v)
                for u in t:
                    out.types[u] = self.types[u]
                out.add_simplex(t)
        return out

    def is_cone(self):
        """A vertex lying in every maximal simplex, or None."""
        apex = None
        common = None
        for s, c in self.coface_count.items():
            if c == 0:
                common = set(s) if common is None else common & set(s)
                if not common:
                    return None
        if common:
            apex = min(common)
        return apex

    def euler_reduced(self) -> int:
        chi = sum(-1 if len(s) % 2 == 0 else 1 for s in self.simplices)
        return chi - 1

    # -- homology ----------------------------------------------------------

    def boundary_matrices(self) -> list[BitMatrix]:
        by_dim: dict[int, list[tuple]] = {}
        for s in self.simplices:
            by_dim.setdefault(len(s) - 1, []).append(s)
        top = max(by_dim) if by_dim else -1
        index = {}
        for d in by_dim:
            by_dim[d].sort()
            for j, s in enumerate(by_dim[d]):
                index[s] = j
        mats = [BitMatrix(0, len(by_dim.get(0, [])))]
        for d in range(1, top + 1):
            rows = [0] * len(by_dim.get(d - 1, []))
            for j, s in enumerate(by_dim[d]):
                for f in combinations(s, d):
                    rows[index[f]] |= 1 << j
            mats.append(BitMatrix(len(rows), len(by_dim[d]), rows))
        return mats

    def reduced_betti(self) -> list[int]:
        if not self.simplices:
            return []
        return reduced_betti_f2(self.boundary_matrices())

    # -- serialization ------------------------------------------------------

    def dump(self) -> str:
        """Text form: vertex/type header then one simplex per line."""
        lines = []
        for v in sorted(self.types):
            if v in self.star_index and self.star_index[v]:
                lines.append(f"vertex {v} {self.types[v]}")
        for s in sorted(self.simplices, key=lambda s: (len(s), s)):
            lines.append(" ".join(str(v) for v in s))
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self.dump().encode()).hexdigest()

    @classmethod
    def load(cls, text: str, flag_typed: bool = False) -> "TypedComplex":
        c = cls(flag_typed)
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("vertex "):
                _, v, t = line.split(None, 2)
                try:
                    t = int(t)
                except ValueError:
                    pass
                c.add_vertex(int(v), t)
            else:
                c.add_simplex(tuple(int(x) for x in line.split()))
        return c


# --------------------------------------------------------------------- poset

class Poset:
    """A finite poset given by its strict order relation."""

    def __init__(self):
        self.tags: dict[int, object] = {}
        self.above: dict[int, set] = {}   # x -> {y : x < y}, transitive

    def add_element(self, x: int, tag=0) -> None:
        if x in self.tags:
            if self.tags[x] != tag:
                raise ValueError(f"element {x} already tagged {self.tags[x]!r}")
            return
        self.tags[x] = tag
        self.above[x] = set()

    def add_relation(self, lo: int, hi: int) -> None:
        """Record lo < hi (transitivity is completed by close())."""
        if lo == hi:
            raise ValueError("strict relation requires distinct elements")
        self.add_element(lo, self.tags.get(lo, 0))
        self.add_element(hi, self.tags.get(hi, 0))
        self.above[lo].add(hi)

    def close(self) -> None:
        """Transitive closure; raises on a cycle."""
        changed = True
        while changed:
            changed = False
            for x in self.above:
                extra = set()
                for y in self.above[x]:
                    extra |= self.above[y]
                if not extra <= self.above[x]:
                    self.above[x] |= extra
                    changed = True
        for x in self.above:
            if x in self.above[x]:
                raise ValueError("relation contains a cycle")

    def less(self, x: int, y: int) -> bool:
        return y in self.above[x]


def order_complex(P: Poset, type_from_tag: bool = True) -> TypedComplex:
    """Simplices = chains of the poset; vertex type = element tag."""
    P.close()
    C = TypedComplex()
    for x in sorted(P.tags):
        C.add_vertex(x, P.tags[x] if type_from_tag else 0)

    elems = sorted(P.tags)

    def grow(chain_tuple, top):
        for y in sorted(P.above[top]):
            s = chain_tuple + (y,)
            C.add_simplex(s)
            grow(s, y)

    for x in elems:
        grow((x,), x)
    return C


# -------------------------------------------------------------- group action

class ComplexAction:
    """A vertex action of group generators on a TypedComplex."""

    def __init__(self, complex_: TypedComplex, generator_maps: list[dict]):
        self.complex = complex_
        self.generator_maps = generator_maps

    def apply(self, vmap: dict, s: tuple) -> tuple:
        return tuple(sorted(vmap[v] for v in s))

    def verify_generators(self) -> None:
        """Generators must permute simplices and preserve types."""
        C = self.complex
        for gi, vmap in enumerate(self.generator_maps):
            for v in C.vertices():
                if C.types[v] != C.types[vmap[v]]:
                    raise ValueError(f"generator {gi} breaks type of vertex {v}")
            for s in C.maximal_simplices():
                if self.apply(vmap, s) not in C.simplices:
                    raise ValueError(f"generator {gi} does not preserve simplex {s}")

    def check_admissible(self, vmap: dict) -> None:
        """An element fixing a simplex setwise must fix it pointwise."""
        C = self.complex
        for s in C.simplices:
            img = self.apply(vmap, s)
            if img == s and any(vmap[v] != v for v in s):
                raise ValueError(f"non-admissible: {s} fixed setwise, not pointwise")

    def fixed_subcomplex(self, vmap: dict) -> TypedComplex:
        self.check_admissible(vmap)
        C = self.complex
        out = TypedComplex(C.flag_typed)
        fixed = {v for v in C.vertices() if vmap[v] == v}
        for s in C.maximal_simplices():
            kept = tuple(v for v in s if v in fixed)
            if kept:
                for v in kept:
                    out.types[v] = C.types[v]
                out.add_simplex(kept)
        return out


# ------------------------------------------------------------------- euler

def euler_by_orbit_counting(stabilizer_orders: dict, group_order: int) -> int:
    """Reduced Euler characteristic from flag stabilizer orders.

    Keys are flag descriptors (tuples of type names); each flag type F
    contributes (-1)^(|F|-1) * |G| / |G_F|.  Exact integer arithmetic.
    """
    chi = -1
    for flag, stab in stabilizer_orders.items():
        if group_order % stab != 0:
            raise ValueError(f"stabilizer order {stab} for {flag} does not divide {group_order}")
        orbit = group_order // stab
        chi += orbit if (len(flag) - 1) % 2 == 0 else -orbit
    return chi
