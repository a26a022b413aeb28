"""Permutations on {0..n-1} stored as flat image arrays.

The hot paths (class enumeration, coset streaming) operate on 2-D numpy
arrays whose rows are image arrays; the Perm class is a thin wrapper used
at API boundaries.  Convention: points are acted on on the right, so
(p * q) means "apply p, then q" and has images q.images[p.images].
"""

from __future__ import annotations

import re

import numpy as np

DTYPE = np.uint16  # degree is capped at 2**16


class DegreeMismatch(ValueError):
    pass


def identity(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=DTYPE)


def is_identity(images: np.ndarray) -> bool:
    return bool((images == np.arange(len(images), dtype=images.dtype)).all())


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Images of p followed by q."""
    if len(p) != len(q):
        raise DegreeMismatch(f"degree {len(p)} vs {len(q)}")
    return q[p]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def conjugate(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Images of g^-1 * x * g."""
    return compose(compose(inverse(g), x), g)


def commutes(p: np.ndarray, q: np.ndarray) -> bool:
    return bool((q[p] == p[q]).all())


def perm_order(p: np.ndarray) -> int:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(p[j])
            length += 1
        order = int(np.lcm(order, length))
    return order


def batch_inverse(batch: np.ndarray) -> np.ndarray:
    """Row-wise inverses of a (k, degree) batch."""
    k, n = batch.shape
    inv = np.empty_like(batch)
    rows = np.arange(n, dtype=batch.dtype)[None, :]
    np.put_along_axis(inv, batch.astype(np.intp), np.broadcast_to(rows, batch.shape), axis=1)
    return inv


def batch_compose_left(g: np.ndarray, batch: np.ndarray) -> np.ndarray:
    """Rows g * b for every row b (apply g first)."""
    return batch[:, g]


def batch_compose_right(batch: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Rows b * g for every row b (apply b first)."""
    return g[batch]


def batch_conjugate(batch: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Rows g^-1 * b * g."""
    return g[batch[:, inverse(g)]]


def batch_conjugate_by_rows(x: np.ndarray, batch: np.ndarray, batch_inv: np.ndarray | None = None) -> np.ndarray:
    """Rows h^-1 * x * h for every row h of the batch."""
    if batch_inv is None:
        batch_inv = batch_inverse(batch)
    mid = x[batch_inv]
    return np.take_along_axis(batch, mid.astype(np.intp), axis=1)


def cycles(p: np.ndarray, skip_fixed: bool = True) -> list[list[int]]:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = int(p[i])
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = int(p[j])
        if len(cyc) > 1 or not skip_fixed:
            out.append(cyc)
    return out


def format_cycles(p: np.ndarray, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + ",".join(str(x + off) for x in c) + ")" for c in cs)


class Perm:
    """Immutable permutation wrapper around an image array."""

    __slots__ = ("images",)

    def __init__(self, images):
        arr = np.asarray(images, dtype=DTYPE)
        if arr.ndim != 1:
            raise ValueError("images must be one-dimensional")
        if len(arr) >= 2**16:
            raise ValueError("degree must be < 2**16")
        if not is_identity(np.sort(arr)):
            raise ValueError("images is not a bijection")
        self.images = arr
        self.images.setflags(write=False)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(identity(degree))

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(compose(self.images, other.images))

    def inv(self) -> "Perm":
        return Perm(inverse(self.images))

    def __pow__(self, g):
        if isinstance(g, Perm):
            return Perm(conjugate(self.images, g.images))
        if g == -1:
            return self.inv()
        raise TypeError("only conjugation and inverse supported")

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def is_identity(self) -> bool:
        return is_identity(self.images)

    def order(self) -> int:
        return perm_order(self.images)

    def __repr__(self) -> str:
        return f"Perm({format_cycles(self.images)})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int, one_based: bool = True) -> np.ndarray:
    """Parse disjoint cycle notation like (1,2,3)(4,5)."""
    body = text.replace(" ", "")
    if body in ("()", ""):
        return identity(degree)
    covered = _CYCLE_RE.sub("", body)
    if covered:
        raise ValueError(f"cannot parse cycle notation: {text!r}")
    img = identity(degree)
    off = 1 if one_based else 0
    for m in _CYCLE_RE.finditer(body):
        part = m.group(1)
        if not part:
            continue
        pts = [int(t) - off for t in re.split(r"[,\s]+", part)]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (0 <= a < degree):
                raise ValueError(f"point {a + off} out of range for degree {degree}")
            img[a] = b
    if not is_identity(np.sort(img)):
        raise ValueError(f"cycles are not disjoint: {text!r}")
    return img


def parse_generator_file(path) -> tuple[int, list[np.ndarray]]:
    """Read the text generator format.

    Line 1: ``perm <degree>``.  Each later non-comment line is either a
    1-based image list of length ``degree`` or a product of cycles in
    1-based notation.  ``#`` starts a comment.
    """
    degree = None
    gens: list[np.ndarray] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if degree is None:
                head = line.split()
                if len(head) != 2 or head[0] != "perm":
                    raise ValueError(f"bad header line: {raw!r}")
                degree = int(head[1])
                if not (0 < degree < 2**16):
                    raise ValueError(f"bad degree {degree}")
                continue
            if line.startswith("("):
                gens.append(parse_cycles(line, degree))
            else:
                vals = [int(t) for t in line.split()]
                if len(vals) != degree:
                    raise ValueError(f"expected {degree} images, got {len(vals)}")
                img = np.asarray(vals, dtype=np.int64) - 1
                if img.min() < 0 or img.max() >= degree:
                    raise ValueError("image out of range")
                img = img.astype(DTYPE)
                if not is_identity(np.sort(img)):
                    raise ValueError("line is not a permutation")
                gens.append(img)
    if degree is None:
        raise ValueError(f"no header in {path}")
    return degree, gens


def write_generator_file(path, degree: int, gens, comment: str = "") -> None:
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"perm {degree}\n")
        for g in gens:
            img = np.asarray(g)
            fh.write(" ".join(str(int(x) + 1) for x in img) + "\n")
