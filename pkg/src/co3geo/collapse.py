"""Free-face collapses, cone-residue star removals, schedules.

A pair (Sigma, sigma) is *free* when Sigma is maximal and every simplex
strictly containing sigma is a face of Sigma.  Removing the pair is a
homotopy equivalence.  This engine applies pairs of codimension one
(|Sigma| = |sigma| + 1), which is the only removal that keeps the
complex face-closed when just the two simplices are deleted; a free
pair of higher codimension is reported by is_free_pair but must be
collapsed through its intermediate faces.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from .complexes import TypedComplex, closure_of


class NotFreeError(ValueError):
    pass


class NotConeError(ValueError):
    pass


def is_free_pair(C: TypedComplex, Sigma, sigma) -> bool:
    Sigma = tuple(sorted(Sigma))
    sigma = tuple(sorted(sigma))
    if Sigma not in C.simplices or sigma not in C.simplices:
        raise KeyError("simplices not in complex")
    if not set(sigma) < set(Sigma):
        return False
    if C.coface_count[Sigma] != 0:
        return False  # Sigma not maximal
    codim = len(Sigma) - len(sigma)
    # all 2^codim - 1 strict cofaces of sigma inside Sigma exist by
    # face-closure, so equality of the count pins them down exactly
    return C.coface_count[sigma] == (1 << codim) - 1


def apply_collapse(C: TypedComplex, Sigma, sigma) -> None:
    """Remove the free pair (Sigma, sigma); codimension must be one."""
    Sigma = tuple(sorted(Sigma))
    sigma = tuple(sorted(sigma))
    if len(Sigma) != len(sigma) + 1:
        raise NotFreeError(f"pair {Sigma}/{sigma} is not of codimension one")
    if not is_free_pair(C, Sigma, sigma):
        raise NotFreeError(f"pair {Sigma}/{sigma} is not free")
    C.remove_maximal(Sigma)
    C.remove_maximal(sigma)


def remove_star_if_cone(C: TypedComplex, v: int) -> int:
    """Remove Star(v) after certifying Res(v) is a cone; returns the apex.

    Refuses (NotConeError) when the residue has no cone vertex; weaker
    evidence such as F2-acyclicity is never accepted here.
    """
    res = C.residue(v) if (v in C.star_index and C.star_index[v]) else None
    if res is None:
        raise KeyError(f"vertex {v} not in complex")
    if not res.simplices:
        raise NotConeError(f"residue of {v} is empty")
    apex = res.is_cone()
    if apex is None:
        raise NotConeError(f"residue of {v} is not a cone")
    C.remove_star(v)
    return apex


class CollapseCertificate:
    """An ordered record of collapse/star steps plus the terminal hash."""

    def __init__(self, steps=None, terminal_hash: str = "", complete: bool = False):
        self.steps: list[tuple] = steps if steps is not None else []
        self.terminal_hash = terminal_hash
        self.complete = complete  # terminal complex is a single vertex

    def record_collapse(self, Sigma, sigma):
        self.steps.append(("collapse", tuple(sorted(Sigma)), tuple(sorted(sigma))))

    def record_star(self, v: int):
        self.steps.append(("star", v))

    def finish(self, C: TypedComplex):
        self.terminal_hash = C.content_hash()
        self.complete = C.n_simplices() == 1
        return self

    def format(self) -> str:
        lines = []
        for step in self.steps:
            if step[0] == "collapse":
                _, Sigma, sigma = step
                lines.append("collapse " + " ".join(map(str, Sigma))
                             + " over " + " ".join(map(str, sigma)))
            else:
                lines.append(f"star {step[1]}")
        lines.append(f"hash {self.terminal_hash}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "CollapseCertificate":
        cert = cls()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "collapse":
                over = parts.index("over")
                cert.record_collapse(tuple(map(int, parts[1:over])),
                                     tuple(map(int, parts[over + 1:])))
            elif parts[0] == "star":
                cert.record_star(int(parts[1]))
            elif parts[0] == "hash":
                cert.terminal_hash = parts[1]
            else:
                raise ValueError(f"bad schedule line: {raw!r}")
        return cert


def greedy_collapse(C: TypedComplex) -> CollapseCertificate:
    """Collapse elementary free pairs until none remain.

    Deterministic: pairs are processed lowest-dimension-sigma first with
    lexicographic tie-break on sigma.  Mutates C; the certificate is
    complete when a single vertex is left.
    """
    cert = CollapseCertificate()
    heap = [(len(s) - 1, s) for s, c in C.coface_count.items() if c == 1]
    heapq.heapify(heap)
    while heap:
        _, sigma = heapq.heappop(heap)
        if sigma not in C.simplices or C.coface_count[sigma] != 1:
            continue
        (Sigma,) = C.cofacets[sigma]
        if C.coface_count[Sigma] != 0:
            continue  # unique strict coface not maximal => codim > 1 situation
        C.remove_maximal(Sigma)
        C.remove_maximal(sigma)
        cert.record_collapse(Sigma, sigma)
        for f in closure_of(Sigma):
            if f in C.simplices and C.coface_count[f] == 1:
                heapq.heappush(heap, (len(f) - 1, f))
    return cert.finish(C)


def replay_schedule(C: TypedComplex, cert_or_text) -> CollapseCertificate:
    """Re-run a schedule on C, enforcing freeness/cone checks per step."""
    if isinstance(cert_or_text, str):
        schedule = CollapseCertificate.parse(cert_or_text)
    else:
        schedule = cert_or_text
    out = CollapseCertificate()
    for n, step in enumerate(schedule.steps):
        try:
            if step[0] == "collapse":
                _, Sigma, sigma = step
                apply_collapse(C, Sigma, sigma)
                out.record_collapse(Sigma, sigma)
            else:
                remove_star_if_cone(C, step[1])
                out.record_star(step[1])
        except (NotFreeError, NotConeError, KeyError, ValueError) as e:
            raise NotFreeError(f"schedule fails at step {n + 1}: {e}") from e
    out.finish(C)
    if schedule.terminal_hash and schedule.terminal_hash != out.terminal_hash:
        raise NotFreeError("terminal hash mismatch after replay")
    return out
